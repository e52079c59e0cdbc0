"""ncbridge: convert CF-convention NetCDF wind archives to WGRD files."""

__version__ = "0.1.0"

from .convert import ConversionSpec, FieldData, SpecError, convert, inspect_summary
from .reader import NcDataset, NcReadError, NcVar, open_dataset
from .timecodec import CalendarError, decode_times
from .wgrdout import WgrdWriteError, write_wgrd

__all__ = [
    "ConversionSpec", "FieldData", "SpecError", "convert", "inspect_summary",
    "NcDataset", "NcReadError", "NcVar", "open_dataset",
    "CalendarError", "decode_times",
    "WgrdWriteError", "write_wgrd",
    "__version__",
]
