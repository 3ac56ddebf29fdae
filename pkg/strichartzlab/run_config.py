#!/usr/bin/env python3
import logging
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .common_utils import parse_complex_list
from .constants import KIND_CONE
from .domain import GaussianProfile
from .extension import FAMILY_EXPONENTIAL, FAMILY_GAUSSIAN, SurfaceFunction
from .grid_io import read_grid
from .trial import TrialFunction

logger = logging.getLogger(__name__)

COMMANDS = ("constants", "theorem1", "strichartz", "sobolev", "cone", "paraboloid",
            "optimize", "scan", "verify-all")

INPUT_GAUSSIAN = "gaussian"
INPUT_GRID = "grid"
INPUT_EXPONENTIAL = "exponential"


@dataclass
class RunConfig:
    """한 번의 실행을 완전히 재현하는 설정"""
    command: str
    n: Optional[int] = None
    k: Optional[int] = None
    q: Optional[str] = None
    r: Optional[str] = None
    case: Optional[str] = None
    input: Optional[str] = None
    samples: int = 1_000_000
    seed: int = 20081017
    chunk_size: int = 65_536
    workers: int = 1
    tolerance: Optional[float] = None
    out: Optional[str] = None
    profile: str = "quick"
    coeffs: Optional[str] = None
    budget: int = 500
    direction: Optional[str] = None
    epsilons: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"알 수 없는 명령입니다: {self.command} (가능: {', '.join(COMMANDS)})")
        if self.profile not in ("quick", "full"):
            raise ValueError(f"profile 은 quick 또는 full 이어야 합니다: {self.profile}")
        if self.workers < 1:
            raise ValueError(f"workers 는 1 이상이어야 합니다: {self.workers}")

    @classmethod
    def from_sources(cls, command: str, flags: dict, config_path: Optional[str] = None) -> "RunConfig":
        """기본값 < 설정 파일 < 명령행 플래그 순으로 병합"""
        values = load_keyvalue(config_path) if config_path else {}
        values.update({key: value for key, value in flags.items() if value is not None})
        values.pop('command', None)
        return cls(command, **values)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_keyvalue(self) -> str:
        lines = [f"# python -m strichartzlab {self.command} --config <this file>"]
        for key, value in self.to_dict().items():
            if key != 'command' and value is not None:
                lines.append(f"{key.replace('_', '-')}={value}")
        return "\n".join(lines) + "\n"


_INT_KEYS = ("n", "k", "samples", "seed", "chunk_size", "workers", "budget")


def _field_casts() -> dict:
    casts = {f.name: str for f in fields(RunConfig)}
    casts.update({key: int for key in _INT_KEYS})
    casts["tolerance"] = float
    return casts


def load_keyvalue(path: str) -> dict:
    """key=value 설정 파일 (# 주석, 빈 줄 무시, 키는 - 또는 _ 허용)"""
    casts = _field_casts()
    values = {}
    with open(path, 'r', encoding='utf-8') as f:
        for number, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError(f"설정 파일 {path}:{number} 에 '=' 가 없습니다: {raw.strip()}")
            key, value = (part.strip() for part in line.split('=', 1))
            key = key.lstrip('-').replace('-', '_')
            if key not in casts or key == 'command':
                raise ValueError(f"설정 파일 {path}:{number} 의 알 수 없는 키: {key}")
            values[key] = casts[key](value)
    return values


# --- 입력 사양 --------------------------------------------------------------------

@dataclass(frozen=True)
class InputSpec:
    kind: str
    A: complex = -0.5
    b: tuple = (0j,)
    C: complex = 0j
    path: Optional[str] = None


def parse_input_spec(text: str) -> InputSpec:
    """'gaussian:A,b,C' | 'exponential:A,b,C' | 'grid:path'

    b 는 스칼라(모든 축 공통) 또는 ';' 로 구분한 벡터. 복소수는 Python 표기(0.5j).
    """
    kind, sep, rest = text.partition(':')
    kind = kind.strip().lower()
    if not sep:
        raise ValueError(f"입력 형식은 kind:params 이어야 합니다: {text}")
    if kind == INPUT_GRID:
        return InputSpec(kind, path=rest.strip())
    if kind not in (INPUT_GAUSSIAN, INPUT_EXPONENTIAL):
        raise ValueError(f"알 수 없는 입력 종류입니다: {kind}")
    parts = rest.split(',')
    if len(parts) != 3:
        raise ValueError(f"{kind} 입력은 A,b,C 세 값이 필요합니다: {rest}")
    try:
        A = complex(parts[0].strip())
        b = tuple(parse_complex_list(parts[1].replace(';', ',')))
        C = complex(parts[2].strip())
    except ValueError:
        raise ValueError(f"입력 매개변수를 복소수로 읽을 수 없습니다: {rest}") from None
    return InputSpec(kind, A, b, C)


def _b_vector(spec: InputSpec, n: int) -> np.ndarray:
    if len(spec.b) == 1:
        return np.full(n, spec.b[0])
    if len(spec.b) != n:
        raise ValueError(f"b 의 길이 {len(spec.b)} 가 n = {n} 과 다릅니다.")
    return np.array(spec.b)


def build_initial_data(spec: InputSpec, n: int, coeffs: Optional[str] = None):
    """공간 쪽 초기 데이터: GaussianProfile, GridFunction, 또는 (coeffs 지정 시) TrialFunction"""
    if spec.kind == INPUT_GRID:
        grid = read_grid(spec.path)
        if grid.n != n:
            raise ValueError(f"격자 차원 {grid.n} 이 n = {n} 과 다릅니다.")
        if coeffs:
            raise ValueError("--coeffs 는 gaussian 입력에만 사용할 수 있습니다.")
        return grid
    if spec.kind != INPUT_GAUSSIAN:
        raise ValueError(f"초기 데이터는 gaussian 또는 grid 입력이어야 합니다: {spec.kind}")
    profile = GaussianProfile(n, spec.A, _b_vector(spec, n), spec.C)
    if coeffs:
        return TrialFunction.from_space_profile(profile, parse_complex_list(coeffs))
    return profile


def build_surface_function(spec: InputSpec, kind: str, n: int) -> SurfaceFunction:
    """곡면 위 함수 g: gaussian (포물면 최대화 family / 원뿔 대조군), exponential (원뿔)"""
    if spec.kind == INPUT_GRID:
        raise ValueError("곡면 함수는 gaussian 또는 exponential 입력만 지원합니다.")
    family = FAMILY_EXPONENTIAL if spec.kind == INPUT_EXPONENTIAL else FAMILY_GAUSSIAN
    if family == FAMILY_EXPONENTIAL and kind != KIND_CONE:
        raise ValueError("exponential 입력은 원뿔(cone) 명령에서만 사용합니다.")
    return SurfaceFunction(kind, n, family, spec.A, _b_vector(spec, n), spec.C)
