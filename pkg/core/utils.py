import json
import time
from pathlib import Path
from typing import Any, Iterable

from core import context


def log_message(msg) -> None:
    timestamp = time.strftime("%Y-%m-%d %H:%M:%S")
    try:
        log_path = context.CODE_DIR / "temp_logs" / context.LOG_FILE_NAME
        log_path.parent.mkdir(exist_ok=True)
        with open(log_path, "a", encoding="utf-8") as log_file:
            log_file.write(f"[{timestamp}] {str(msg)}\n")
    except Exception as e:
        print(f"[로그 저장 실패: {e}]")


def to_jsonl(records: Iterable[dict[str, Any]]) -> str:
    """레코드들을 JSONL 문자열로 직렬화합니다."""
    return "".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records)


def write_jsonl(path: Path, records: Iterable[dict[str, Any]]) -> int:
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    return count


def read_jsonl(path: Path) -> list[dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def resolve_data_path(name: str | Path) -> Path:
    """상대 경로는 작업 디렉토리 → data 디렉토리 순으로 찾습니다."""
    path = Path(name)
    if path.is_absolute() or path.exists():
        return path
    candidate = context.DATA_DIR / path
    if candidate.exists():
        return candidate
    return context.DATA_DIR / "programs" / path
