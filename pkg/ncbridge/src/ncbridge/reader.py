"""Uniform read access to NetCDF classic and NetCDF-4 (HDF5) files.

Classic (CDF-1/CDF-2 magic) goes through scipy; NetCDF-4 goes through h5py,
addressing variables as named datasets. Both are wrapped behind one small
facade that exposes variables, their attributes and dimension names.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import h5py
import numpy as np
from scipy.io import netcdf_file


class NcReadError(ValueError):
    """File unreadable or variable missing."""


def _text(value) -> str:
    if isinstance(value, bytes):
        return value.decode("utf-8", "replace")
    if isinstance(value, np.ndarray) and value.dtype.kind in "SU" and value.size == 1:
        return _text(value.item())
    return str(value)


@dataclass
class NcVar:
    name: str
    data: np.ndarray
    attrs: dict[str, object]
    dims: tuple[str, ...]

    def attr_text(self, key: str, default: str | None = None) -> str | None:
        if key not in self.attrs:
            return default
        return _text(self.attrs[key])


class NcDataset:
    """In-memory view of the variables of one NetCDF file."""

    def __init__(self, path, fmt: str, variables: dict[str, NcVar],
                 dims: dict[str, int]):
        self.path = Path(path)
        self.format = fmt
        self.variables = variables
        self.dims = dims

    def var(self, name: str) -> NcVar:
        if name not in self.variables:
            have = ", ".join(sorted(self.variables)) or "none"
            raise NcReadError(
                f"variable {name!r} not found in {self.path} (has: {have})")
        return self.variables[name]

    def find_by_names_or_units(self, names: tuple[str, ...],
                               unit_hints: tuple[str, ...]) -> NcVar | None:
        for name in names:
            if name in self.variables:
                return self.variables[name]
        for var in self.variables.values():
            units = (var.attr_text("units") or "").lower()
            if any(units.startswith(h) for h in unit_hints):
                return var
        return None


def open_dataset(path) -> NcDataset:
    path = Path(path)
    try:
        magic = path.open("rb").read(8)
    except OSError as exc:
        raise NcReadError(f"cannot read {path}: {exc}") from exc
    if magic.startswith(b"CDF"):
        return _open_classic(path)
    if magic.startswith(b"\x89HDF"):
        return _open_hdf5(path)
    raise NcReadError(f"{path} is neither NetCDF classic nor NetCDF-4 "
                      f"(magic {magic[:4]!r})")


def _open_classic(path: Path) -> NcDataset:
    variables: dict[str, NcVar] = {}
    try:
        with netcdf_file(str(path), "r", mmap=False) as nc:
            dims = {k: (0 if v is None else int(v)) for k, v in nc.dimensions.items()}
            for name, var in nc.variables.items():
                data = np.array(var[:]) if var.data.ndim else np.array(var.getValue())
                variables[name] = NcVar(
                    name=name, data=data,
                    attrs=dict(var._attributes),
                    dims=tuple(var.dimensions))
    except NcReadError:
        raise
    except Exception as exc:  # scipy raises assorted types on corrupt files
        raise NcReadError(f"cannot parse {path} as NetCDF classic: {exc}") from exc
    return NcDataset(path, "NetCDF classic", variables, dims)


def _open_hdf5(path: Path) -> NcDataset:
    variables: dict[str, NcVar] = {}
    dims: dict[str, int] = {}
    try:
        handle = h5py.File(path, "r")
    except Exception as exc:
        raise NcReadError(f"cannot open {path} as NetCDF-4/HDF5: {exc}") from exc
    with handle as f:
        def dim_names(obj) -> tuple[str, ...]:
            names = []
            for i in range(obj.ndim):
                label = f"dim{i}"
                try:
                    scales = obj.dims[i].keys()
                    if scales:
                        label = obj.dims[i][0].name.rsplit("/", 1)[-1]
                except (RuntimeError, KeyError, IndexError):
                    pass
                names.append(label)
            return tuple(names)

        def visit(name, obj):
            if isinstance(obj, h5py.Dataset):
                attrs = {k: obj.attrs[k] for k in obj.attrs
                         if not k.startswith(("DIMENSION_", "_Netcdf4", "CLASS",
                                              "NAME", "REFERENCE_LIST"))}
                short = name.rsplit("/", 1)[-1]
                variables[short] = NcVar(name=short, data=obj[()],
                                         attrs=attrs, dims=dim_names(obj))
        f.visititems(visit)
    for var in variables.values():
        for d, size in zip(var.dims, var.data.shape):
            dims.setdefault(d, int(size))
    return NcDataset(path, "NetCDF-4 (HDF5)", variables, dims)
