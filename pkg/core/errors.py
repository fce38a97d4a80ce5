# ==========================================
# 예외 클래스
# ==========================================


class WorkbenchError(Exception):
    """모든 워크벤치 예외의 기반 클래스"""


class ContractViolation(WorkbenchError):
    """입력이 연산의 계약을 어겼을 때 발생 (CLI 종료 코드 2)"""


class InvalidName(ContractViolation):
    """이름(name)이 표현의 정의역 조건을 위반했을 때 발생"""


class OracleGap(ContractViolation):
    """화이트리스트 오라클이 등록되지 않은 기계에 대해 질의받았을 때 발생"""


class NotInRange(ContractViolation):
    """입력이 역사상(J⁻¹ 등)의 치역 밖에 있을 때 발생"""


class MalformedCode(ContractViolation):
    """PhiCode 항목이 서로 비교 불가능한 출력을 나열할 때 발생"""


class KindMismatch(ContractViolation):
    """기계 종류(monotone/limit/fmc)가 연산의 요구와 다를 때 발생"""


class BudgetExhausted(WorkbenchError):
    """스텝/탐색 예산 안에 결과를 얻지 못했을 때 발생"""

    def __init__(self, message: str, *, spent: int | None = None):
        super().__init__(message)
        self.spent = spent
