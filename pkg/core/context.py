import threading
from pathlib import Path

# 여러 모듈에서 공유되는 전역 컨텍스트입니다.

# 레지스트리(네이티브 태그, 합성 기계 장부, 인증서) 동시 접근 방지용 락
registry_lock = threading.Lock()

# 명령어 실행 위치
BASE_DIR = Path.cwd()

# 코드가 위치한 디렉토리 (로그, 데이터 파일 기준) - core 폴더의 부모
CODE_DIR = Path(__file__).resolve().parent.parent

# 저장소에 포함된 프로그램/매니페스트 디렉토리
DATA_DIR = CODE_DIR / "data"

LOG_FILE_NAME = "limitbench.log"
