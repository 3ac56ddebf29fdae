# 보고서의 모든 실수는 17 유효숫자로 기록
FLOAT_DIGITS = 17


def format_float(value: float) -> str:
    """17 유효숫자 문자열 (왕복 변환 시 같은 double)"""
    return f"{value:.{FLOAT_DIGITS}g}"


def parse_float_list(text: str) -> list[float]:
    """'-0.4, -0.2, 0' → [-0.4, -0.2, 0.0] (빈 항목은 무시)"""
    return [float(item) for item in text.replace(";", ",").split(",") if item.strip()]


def parse_complex_list(text: str) -> list[complex]:
    """'0, 0.3, 0.1+0.2j' → 복소수 목록"""
    return [complex(item.strip().replace(" ", "")) for item in text.split(",") if item.strip()]
