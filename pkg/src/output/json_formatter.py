"""JSON output formatter."""

from typing import Any

import msgspec
import numpy as np


def _enc_hook(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise NotImplementedError(f"cannot encode {type(obj).__name__}")


_encoder = msgspec.json.Encoder(enc_hook=_enc_hook)


def to_json(data: Any) -> str:
    """Dataclasses, Structs and numpy values as indented JSON."""
    return msgspec.json.format(_encoder.encode(data), indent=2).decode()


def print_json(data: Any):
    """Print data as formatted JSON to stdout."""
    print(to_json(data))
