# Init file for spaces package
from spaces.representations import BAIRE, Representation, jump, representation_by_name, with_tag
from spaces.translators import Regime, Translator, chain_translators, compose

__all__ = [
    "BAIRE",
    "Representation",
    "jump",
    "representation_by_name",
    "with_tag",
    "Regime",
    "Translator",
    "chain_translators",
    "compose",
]
