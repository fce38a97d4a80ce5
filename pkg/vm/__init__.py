# Init file for vm package
from vm.program import Kind, MachineCode, Program, decode_program, encode_program, format_program, parse_program
from vm.machine import LimitRun, output_stream, run_limit, run_monotone
from vm.oracle import (
    StepOracle,
    Verdict,
    WhitelistOracle,
    jump_approx,
    jump_stream,
    oracle_query,
    we_enumerate,
    we_stages,
)
from vm import synthesis  # noqa: F401  합성 패밀리 등록
from vm.phi import PhiCode, phi_apply, phi_smn

__all__ = [
    "Kind",
    "MachineCode",
    "Program",
    "decode_program",
    "encode_program",
    "format_program",
    "parse_program",
    "LimitRun",
    "output_stream",
    "run_limit",
    "run_monotone",
    "StepOracle",
    "Verdict",
    "WhitelistOracle",
    "jump_approx",
    "jump_stream",
    "oracle_query",
    "we_enumerate",
    "we_stages",
    "PhiCode",
    "phi_apply",
    "phi_smn",
]
