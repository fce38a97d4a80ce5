# Init file for metric package
from metric.rationals import Q, Interval, rational_at, rational_index
from metric.cms import CANTOR, CMS, NATURALS, POLYNOMIALS, REALS, UNIT, cms_by_name
from metric.cauchy import Ball, Relation, cauchy_decode, formal_relations, is_cauchy_prefix

__all__ = [
    "Q",
    "Interval",
    "rational_at",
    "rational_index",
    "CANTOR",
    "CMS",
    "NATURALS",
    "POLYNOMIALS",
    "REALS",
    "UNIT",
    "cms_by_name",
    "Ball",
    "Relation",
    "cauchy_decode",
    "formal_relations",
    "is_cauchy_prefix",
]
