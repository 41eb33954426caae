"""File formats: signal CSV, series and morphism manifests, grid CSV, PGM.

Signals are plain-text CSV with one ``re,im`` row per sample.  Series
(.vk) and morphism (.vm) files are JSON manifests with complex data
stored as ``[re, im]`` pairs in row-major order; floats round-trip
bit-exactly through Python's repr.  Grids are CSV matrices with rows in
time order, and heatmaps are binary 8-bit PGM with linear magnitude
scaling normalized to the maximum.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ContractViolation
from .kernels import VolterraKernel, VolterraSeries, zero_pad
from .morphisms import Morphism

__all__ = [
    "read_signal_csv",
    "write_signal_csv",
    "write_grid_csv",
    "read_grid_csv",
    "write_pgm",
    "save_series",
    "load_series",
    "save_morphism",
    "load_morphism",
]


def write_signal_csv(path, signal):
    signal = np.asarray(signal, dtype=np.complex128)
    with open(path, "w") as fh:
        for z in signal:
            fh.write(f"{float(z.real)!r},{float(z.imag)!r}\n")


def read_signal_csv(path) -> np.ndarray:
    out = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ContractViolation(f"{path}:{line_no}: expected 're,im', got {line!r}")
            out.append(complex(float(parts[0]), float(parts[1])))
    if not out:
        raise ContractViolation(f"{path}: empty signal file")
    return np.asarray(out, dtype=np.complex128)


def write_grid_csv(path, values):
    """Rows are time samples.  Real grids are written as plain floats;
    complex grids interleave re and im columns."""
    values = np.asarray(values)
    is_real = np.max(np.abs(values.imag)) <= 1e-9 * max(np.max(np.abs(values)), 1e-300)
    with open(path, "w") as fh:
        for row in values:
            if is_real:
                fh.write(",".join(repr(float(v)) for v in row.real))
            else:
                fh.write(",".join(f"{float(v.real)!r},{float(v.imag)!r}" for v in row))
            fh.write("\n")


def read_grid_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(",")])
    return np.asarray(rows)


def write_pgm(path, values):
    """Binary P5 heatmap: linear magnitude scaling, normalized to the max."""
    mags = np.abs(np.asarray(values))
    top = float(mags.max())
    pixels = np.zeros(mags.shape, dtype=np.uint8) if top == 0 else np.clip(
        np.round(mags / top * 255.0), 0, 255
    ).astype(np.uint8)
    height, width = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def _pairs(array: np.ndarray) -> list:
    flat = np.asarray(array, dtype=np.complex128).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _from_pairs(pairs, shape) -> np.ndarray:
    data = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return data.reshape(shape)


def _check_index(index):
    if not isinstance(index, (int, str)):
        raise ContractViolation(
            f"only int and str indices are serializable, got {type(index).__name__}"
        )
    return index


def save_series(path, series: VolterraSeries):
    """Write a series manifest; kernels are padded to the common memory."""
    M = series.memory
    entries = []
    for index, kernel in series.kernels.items():
        padded = zero_pad(kernel, M) if kernel.order > 0 else kernel
        entries.append(
            {
                "index": _check_index(index),
                "order": kernel.order,
                "data": _pairs(padded.data),
            }
        )
    manifest = {"version": 1, "memory": M, "kernels": entries}
    with open(path, "w") as fh:
        json.dump(manifest, fh)
        fh.write("\n")


def _load_manifest(path) -> dict:
    with open(path) as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ContractViolation(f"{path}: not a valid manifest ({exc})") from None
    if not isinstance(manifest, dict):
        raise ContractViolation(f"{path}: manifest must be a JSON object")
    return manifest


def load_series(path) -> VolterraSeries:
    manifest = _load_manifest(path)
    if manifest.get("version") != 1:
        raise ContractViolation(f"{path}: unsupported series manifest version")
    M = int(manifest["memory"])
    kernels = {}
    for entry in manifest["kernels"]:
        order = int(entry["order"])
        shape = (M,) * order if order else ()
        kernels[entry["index"]] = VolterraKernel(
            order, M if order else 1, _from_pairs(entry["data"], shape)
        )
    return VolterraSeries(kernels)


def save_morphism(path, m: Morphism):
    components = []
    for i, target in m.index_map.items():
        components.append(
            {
                "source": _check_index(i),
                "target": _check_index(target),
                "matrix": [[int(v) for v in row] for row in m.matrices[i]],
                "mask_order": int(m.masks[i].ndim),
                "mask": _pairs(m.masks[i]),
            }
        )
    manifest = {"version": 1, "length": m.length, "components": components}
    with open(path, "w") as fh:
        json.dump(manifest, fh)
        fh.write("\n")


def load_morphism(path) -> Morphism:
    manifest = _load_manifest(path)
    if manifest.get("version") != 1:
        raise ContractViolation(f"{path}: unsupported morphism manifest version")
    L = manifest["length"]
    index_map, matrices, masks = {}, {}, {}
    for comp in manifest["components"]:
        i = comp["source"]
        index_map[i] = comp["target"]
        matrices[i] = np.asarray(comp["matrix"], dtype=np.int64)
        order = int(comp["mask_order"])
        masks[i] = _from_pairs(comp["mask"], (L,) * order)
    return Morphism(index_map, matrices, masks)
