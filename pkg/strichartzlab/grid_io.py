#!/usr/bin/env python3
import logging
import os
import struct
import tempfile

import numpy as np

from .domain import GridFunction

logger = logging.getLogger(__name__)

# 32바이트 헤더: magic(8) + n(u64) + N(u64) + L(f64), little-endian
GRID_MAGIC = b"STRZGRID"
HEADER = struct.Struct('<8sQQd')
SAMPLE_DTYPE = np.dtype('<c16')


def read_grid(path: str) -> GridFunction:
    """STRZGRID 파일을 GridFunction 으로 읽는다 (row-major, (re, im) float64 쌍)"""
    with open(path, 'rb') as f:
        header = f.read(HEADER.size)
        if len(header) != HEADER.size:
            raise ValueError(f"격자 파일 헤더가 너무 짧습니다: {path}")
        magic, n, N, L = HEADER.unpack(header)
        if magic != GRID_MAGIC:
            raise ValueError(f"격자 파일 magic 이 {GRID_MAGIC!r} 가 아닙니다: {magic!r}")
        data = f.read()
    expected = (N ** n) * SAMPLE_DTYPE.itemsize
    if len(data) != expected:
        raise ValueError(f"격자 데이터 크기 오류: {len(data)} bytes (기대값 {expected} bytes, n={n}, N={N})")
    samples = np.frombuffer(data, dtype=SAMPLE_DTYPE).astype(complex)
    logger.debug(f"ℹ️ 격자 읽기 완료: {path} (n={n}, N={N}, L={L})")
    return GridFunction(int(n), float(L), int(N), samples)


def write_grid(grid: GridFunction, path: str) -> None:
    """임시 파일에 쓴 뒤 rename 으로 교체"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    payload = HEADER.pack(GRID_MAGIC, grid.n, grid.points_per_axis, float(grid.half_width))
    payload += np.ascontiguousarray(grid.samples, dtype=SAMPLE_DTYPE).tobytes(order='C')
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp_', suffix='.strz')
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(payload)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
