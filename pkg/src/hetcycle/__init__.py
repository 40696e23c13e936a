"""Tangency cascades near a heterodimensional cycle, in a linearized saddle chart."""
from hetcycle.cascade import CascadeConfig, CascadeResult, TangencyRecord, run_cascade, strip
from hetcycle.chart_model import (ChartDomain, CurveFamily, ParamPoint, SaddleSpectrum,
                                  SurfaceFamily, TangencyType, check_generic_conditions, classify,
                                  synthesize_family)
from hetcycle.family_io import FamilyBundle, load_family, save_family
from hetcycle.geometry import ContactClass, curvature, gap_jet, normal_curvature
from hetcycle.inclination import (c2_deviation, convergence_table, iterate_strand, max_curvature,
                                  reparametrize)
from hetcycle.poly import MPoly
from hetcycle.unfolding import unfold_cascade, verify_unfolding

__version__ = "0.1.0"

__all__ = [
    "CascadeConfig", "CascadeResult", "ChartDomain", "ContactClass", "CurveFamily",
    "FamilyBundle", "MPoly", "ParamPoint", "SaddleSpectrum", "SurfaceFamily", "TangencyRecord",
    "TangencyType", "c2_deviation", "check_generic_conditions", "classify", "convergence_table",
    "curvature", "gap_jet", "iterate_strand", "load_family", "max_curvature", "normal_curvature",
    "reparametrize", "run_cascade", "save_family", "strip", "synthesize_family",
    "unfold_cascade", "verify_unfolding",
]
