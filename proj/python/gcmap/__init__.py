"""Generalized cyclotomic mappings over finite fields."""
import json

from ._gcmap import Field, GcmError, run
from ._gcmap import verify as _verify

__all__ = ["Field", "GcmError", "run", "verify"]


def verify(sweep):
    """Differential sweep from key = value text or a dict of the same keys."""
    if isinstance(sweep, dict):
        sweep = "\n".join(f"{k} = {', '.join(map(str, v)) if isinstance(v, (list, tuple)) else v}"
                          for k, v in sweep.items())
    return json.loads(_verify(sweep))
