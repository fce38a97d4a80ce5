# Init file for transforms package
from transforms.normal_forms import diagonal_limit, fmc_normal_form, limit_to_monotone
from transforms.compose import limit_after_fmc, monotone_after_limit, naive_composition_demo
from transforms.jump import jump_inverse_realizer, jump_normal_form, jump_transport, low_apply
from transforms.inversion import LimitInversion, limit_inversion
from transforms.halting import halting_normal_form
from transforms.control import UniformLimitControl, uniform_limit_control
from transforms.generics import jump_on_generics
from transforms.witnesses import WITNESSES, TransparencyWitness, componentwise

__all__ = [
    "diagonal_limit",
    "fmc_normal_form",
    "limit_to_monotone",
    "limit_after_fmc",
    "monotone_after_limit",
    "naive_composition_demo",
    "jump_inverse_realizer",
    "jump_normal_form",
    "jump_transport",
    "low_apply",
    "LimitInversion",
    "limit_inversion",
    "halting_normal_form",
    "UniformLimitControl",
    "uniform_limit_control",
    "jump_on_generics",
    "WITNESSES",
    "TransparencyWitness",
    "componentwise",
]
