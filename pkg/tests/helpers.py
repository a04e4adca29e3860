from __future__ import annotations

import copy
import json
from pathlib import Path

from cicero.fixtures import load_cases
from cicero.grammar import cicero_from_dict
from cicero.transform import compile_spec
from cicero.vis import canonical_serialize, vis_from_dict

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

LABEL_STYLE = {"fontSize": 11, "color": "#555555"}

SALES = [("Apparel", 120), ("Books", 80), ("Electronics", 260), ("Garden", 50), ("Toys", 140)]


def bar_doc(*, width=480, height=300, values=(0, 100, 200, 300), labels=False) -> dict:
    doc = {
        "width": width,
        "height": height,
        "data": {
            "schema": [{"field": "category", "type": "nominal"}, {"field": "sales", "type": "quantitative"}],
            "rows": [{"category": c, "sales": v} for c, v in SALES],
        },
        "layers": [
            {
                "id": "bars",
                "mark": "bar",
                "encoding": {"x": {"field": "category"}, "y": {"field": "sales", "scale": {"domain": [0, 300]}}},
                "style": {"color": "#4c78a8"},
            }
        ],
        "axes": [
            {"orient": "horizontal", "field": "category", "labelStyle": dict(LABEL_STYLE)},
            {"orient": "vertical", "field": "sales", "values": list(values), "labelStyle": dict(LABEL_STYLE)},
        ],
        "texts": [{"role": "title", "segments": [{"text": "Sales by category"}], "style": {"fontSize": 15}}],
    }
    if labels:
        doc["layers"][0]["label"] = {"field": "sales", "style": {"fontSize": 10}, "placement": {"mode": "auto"}}
    return doc


def bar_spec(**kw):
    return vis_from_dict(bar_doc(**kw))


def rules(*ts) -> dict:
    return {"transformations": list(ts)}


def rule(specifier, action, option=None, important=False) -> dict:
    r = {"specifier": specifier, "action": action}
    if option is not None:
        r["option"] = option
    if important:
        r["important"] = True
    return r


def run(spec, *ts, validate=True):
    """Compile ``spec`` (model or dict) under the rule dicts ``ts``."""
    if isinstance(spec, dict):
        spec = vis_from_dict(copy.deepcopy(spec))
    return compile_spec(spec, cicero_from_dict(rules(*ts)), validate=validate)


def text(spec) -> str:
    return canonical_serialize(spec)


def load_json(path: Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def cases():
    return load_cases(FIXTURES)


def case(name: str):
    return next(c for c in cases() if c.name == name)
