import csv
import io
import json
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import numpy as np
from pydantic import BaseModel

from os_vilenkin.characters import CharIndexS
from os_vilenkin.command import Status
from os_vilenkin.heisenberg import HeisDualIndex, HeisElement
from os_vilenkin.phase import Cyclotomic, Phase

SIGNIFICANT_DIGITS = 12


def render_float(v):
    v = float(v)
    if v != v or v in (float("inf"), float("-inf")):
        return str(v)
    return float(f"{v:.{SIGNIFICANT_DIGITS}g}")


def render_key(key):
    if isinstance(key, CharIndexS):
        return f"({key.m},{key.n})"
    if isinstance(key, HeisDualIndex):
        alpha, beta, gamma = key.as_tuple()
        return f"alpha={','.join(alpha)};beta={','.join(beta)};gamma={gamma}"
    if isinstance(key, tuple):
        return "(" + ",".join(str(render_key(k)) for k in key) + ")"
    if isinstance(key, Fraction):
        return str(key)
    return str(key)


def render_value(v):
    """Plain JSON data; exact values stay exact as strings or integer triples."""
    if isinstance(v, Enum):
        return v.value
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Phase):
        return {"num": v.num, "p": v.p, "exp": v.exp}
    if isinstance(v, Cyclotomic):
        if v.is_rational():
            return str(v.rational_value())
        if len(v.coeffs) == 1:
            j, c = next(iter(v.coeffs.items()))
            return {"coef": str(c), "phase": render_value(Phase(v.p, j, v.order))}
        return render_value(complex(v))
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": render_float(v.real), "im": render_float(v.imag)}
    if isinstance(v, (float, np.floating)):
        return render_float(v)
    if isinstance(v, CharIndexS):
        return render_key(v)
    if isinstance(v, HeisDualIndex):
        alpha, beta, gamma = v.as_tuple()
        return {"alpha": alpha, "beta": beta, "gamma": gamma}
    if isinstance(v, HeisElement):
        return {"x": list(v.x), "y": list(v.y), "z": v.z}
    if isinstance(v, np.ndarray):
        return [render_value(e) for e in v.tolist()]
    if isinstance(v, dict):
        return {render_key(k): render_value(e) for k, e in v.items()}
    if hasattr(v, "_asdict"):
        return render_value(v._asdict())
    if isinstance(v, (list, tuple, set, frozenset)):
        return [render_value(e) for e in v]
    return str(v)


class Report(BaseModel):
    command: str
    config: dict
    result: Any
    status: Status
    elapsed_ms: Union[float, None] = None

    def payload(self):
        return {
            "command": self.command,
            "config": render_value(self.config),
            "result": render_value(self.result),
            "status": self.status.value,
            "elapsed_ms": None
            if self.elapsed_ms is None
            else render_float(self.elapsed_ms),
        }

    def to_json(self):
        return json.dumps(self.payload(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self, table=None):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if table is not None:
            columns, rows = table
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(render_value(v)) for v in row])
        else:
            writer.writerow(["key", "value"])
            for key, value in _flatten(self.payload()):
                writer.writerow([key, _cell(value)])
        return buffer.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False, separators=(",", ":"))
    if v is None:
        return ""
    return v


def _flatten(data, prefix=""):
    if isinstance(data, dict):
        for k, v in data.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    else:
        yield prefix, data
