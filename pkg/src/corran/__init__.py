"""Correspondence analysis of two-way contingency tables."""

__version__ = "0.1.0"

from .association import AssociationReport, extract, flag_positive_only
from .ca import CorrespondenceModel, coordinates, fit, inertia_summary
from .residuals import ResidualTable, chi_square_upper_tail, residuals
from .svd import svd
from .table import ContingencyTable, parse_long_csv, parse_matrix_csv, validate

__all__ = [
    "AssociationReport",
    "ContingencyTable",
    "CorrespondenceModel",
    "ResidualTable",
    "chi_square_upper_tail",
    "coordinates",
    "extract",
    "fit",
    "flag_positive_only",
    "inertia_summary",
    "parse_long_csv",
    "parse_matrix_csv",
    "residuals",
    "svd",
    "validate",
]
