__version__ = "0.1.0"

# 보고서 JSON 스키마 버전
ARTIFACT_VERSION = "1.0"
