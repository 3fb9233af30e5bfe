"""Workspace files: a single JSON document naming complexes, chain maps,
groups, group homomorphisms, towers of either kind, and level pro-maps.

Matrices are arrays of arrays of decimal integer strings so arbitrary
precision survives serialization; plain integers are accepted on input.
parse/serialize round-trip byte-identically on canonical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional

from .chain import ChainComplex, ChainMap, chain_map, is_chain_map, make_complex, validate
from .errors import ParseError, ValidationError
from .exactalg.groups import FgAbGroup, GroupHom, group_from_presentation, hom
from .exactalg.matrices import IntMatrix
from .exactalg.ring import GF, RingTag, ZZ
from .pro import ProMap, TailPolicy, Tower, level_map


@dataclass
class Config:
    budget_filler: int = 8
    budget_reindex: int = 8
    lim_window: int = 24

    def validate(self):
        if min(self.budget_filler, self.budget_reindex, self.lim_window) <= 0:
            raise ValidationError("budgets must be positive")


@dataclass
class Workspace:
    ring: RingTag
    config: Config
    complexes: Dict[str, ChainComplex] = field(default_factory=dict)
    maps: Dict[str, ChainMap] = field(default_factory=dict)
    groups: Dict[str, FgAbGroup] = field(default_factory=dict)
    group_maps: Dict[str, GroupHom] = field(default_factory=dict)
    towers: Dict[str, Tower] = field(default_factory=dict)
    group_towers: Dict[str, Tower] = field(default_factory=dict)
    promaps: Dict[str, ProMap] = field(default_factory=dict)
    group_promaps: Dict[str, ProMap] = field(default_factory=dict)

    def lookup(self, name: str):
        for table in (self.complexes, self.maps, self.groups, self.group_maps,
                      self.towers, self.group_towers, self.promaps,
                      self.group_promaps):
            if name in table:
                return table[name]
        raise ParseError(f"unknown object '{name}'")


def _parse_matrix(data, ring: RingTag, where: str) -> IntMatrix:
    if not isinstance(data, list):
        raise ParseError(f"{where}: matrix must be an array of rows")
    rows = []
    width = None
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise ParseError(f"{where}: row {i} is not an array")
        try:
            vals = [int(x) for x in row]
        except (TypeError, ValueError):
            raise ParseError(f"{where}: row {i} has a non-integer entry")
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ParseError(f"{where}: row {i} has inconsistent width")
        rows.append(vals)
    if width is None:
        raise ParseError(f"{where}: matrix needs explicit shape; got []")
    return IntMatrix.from_rows(rows, ring, cols=width)


def _parse_ring(data) -> RingTag:
    if data == "Z":
        return ZZ
    if isinstance(data, dict) and set(data) == {"p"}:
        try:
            return GF(int(data["p"]))
        except ValidationError as e:
            raise ParseError(str(e))
    raise ParseError("ring must be \"Z\" or {\"p\": <prime>}")


def _parse_complex(name: str, data, ring: RingTag) -> ChainComplex:
    try:
        ranks = {int(k): int(v) for k, v in data.get("ranks", {}).items()}
    except (TypeError, ValueError):
        raise ParseError(f"complex '{name}': bad ranks table")
    diffs = {}
    for k, m in data.get("diffs", {}).items():
        n = int(k)
        rows = ranks.get(n - 1, 0)
        mat = _parse_matrix(m, ring, f"complex '{name}' diff {n}") if m else \
            IntMatrix.zeros(rows, ranks.get(n, 0), ring)
        if mat.shape != (ranks.get(n - 1, 0), ranks.get(n, 0)):
            raise ValidationError(
                f"complex '{name}': differential at degree {n} has shape "
                f"{mat.shape}, expected {(ranks.get(n - 1, 0), ranks.get(n, 0))}")
        diffs[n] = mat
    try:
        X = make_complex(ring, ranks, diffs)
    except AssertionError:
        # locate the offending degree for the error message
        for n in sorted(diffs):
            d1 = diffs.get(n)
            d0 = diffs.get(n - 1)
            if d0 is not None and d1 is not None and not (d0 @ d1).is_zero:
                raise ValidationError(
                    f"complex '{name}': d o d != 0 at degree {n}")
        raise ValidationError(f"complex '{name}': invalid differentials")
    return X


def _parse_chain_map(name, data, ws: Workspace) -> ChainMap:
    src = ws.complexes.get(data.get("source"))
    tgt = ws.complexes.get(data.get("target"))
    if src is None or tgt is None:
        raise ParseError(f"map '{name}': unknown source or target")
    comps = {}
    for k, m in data.get("comps", {}).items():
        n = int(k)
        comps[n] = _parse_matrix(m, ws.ring, f"map '{name}' degree {n}")
    try:
        f = chain_map(src, tgt, comps)
    except AssertionError:
        for n in sorted(comps):
            g = chain_map(src, tgt, comps, check=False)
            if not (tgt.diff(n) @ g.comp(n) - g.comp(n - 1) @ src.diff(n)).is_zero:
                raise ValidationError(
                    f"map '{name}': square does not commute at degree {n}")
        raise ValidationError(f"map '{name}': invalid components")
    return f


def _parse_group(name, data, ring) -> FgAbGroup:
    gens = int(data.get("generators", 0))
    rels = data.get("relations", [])
    cols = []
    for i, rel in enumerate(rels):
        vals = [int(x) for x in rel]
        if len(vals) != gens:
            raise ValidationError(f"group '{name}': relation {i} has wrong length")
        cols.append(vals)
    mat = IntMatrix.from_columns(cols, gens, ring)
    return group_from_presentation(mat)


def _parse_group_map(name, data, ws: Workspace) -> GroupHom:
    src = ws.groups.get(data.get("source"))
    tgt = ws.groups.get(data.get("target"))
    if src is None or tgt is None:
        raise ParseError(f"group map '{name}': unknown source or target")
    mat = _parse_matrix(data.get("matrix", []), ws.ring, f"group map '{name}'") \
        if data.get("matrix") else IntMatrix.zeros(tgt.ngens, src.ngens, ws.ring)
    if mat.shape != (tgt.ngens, src.ngens):
        raise ValidationError(f"group map '{name}': matrix shape {mat.shape} "
                              f"!= {(tgt.ngens, src.ngens)}")
    try:
        return hom(src, tgt, mat)
    except Exception:
        raise ValidationError(f"group map '{name}': does not respect relations")


def _parse_tower(name, data, entry_table, map_table, kind) -> Tower:
    entries = []
    for e in data.get("entries", []):
        if e not in entry_table:
            raise ParseError(f"tower '{name}': unknown entry '{e}'")
        entries.append(entry_table[e])
    structure = []
    for m in data.get("structure", []):
        if m not in map_table:
            raise ParseError(f"tower '{name}': unknown structure map '{m}'")
        structure.append(map_table[m])
    tail = data.get("tail", {})
    if "constant_from" in tail:
        policy = TailPolicy.constant_from(int(tail["constant_from"]))
    elif "repeat_from" in tail:
        endo_name = tail.get("endo")
        if endo_name not in map_table:
            raise ParseError(f"tower '{name}': unknown tail endo '{endo_name}'")
        policy = TailPolicy.repeat_from(int(tail["repeat_from"]),
                                        map_table[endo_name])
    else:
        raise ParseError(f"tower '{name}': tail must declare constant_from "
                         "or repeat_from")
    try:
        return Tower(tuple(entries), tuple(structure), policy)
    except AssertionError as e:
        raise ValidationError(f"tower '{name}': {e}")


def _parse_promap(name, data, tower_table, map_table) -> ProMap:
    src = tower_table.get(data.get("source"))
    tgt = tower_table.get(data.get("target"))
    if src is None or tgt is None:
        raise ParseError(f"promap '{name}': unknown source or target tower")
    comps = []
    for m in data.get("comps", []):
        if m not in map_table:
            raise ParseError(f"promap '{name}': unknown component '{m}'")
        comps.append(map_table[m])
    try:
        return level_map(src, tgt, tuple(comps))
    except AssertionError:
        raise ValidationError(f"promap '{name}': squares do not commute")


def parse_workspace(path: str) -> Workspace:
    try:
        with open(path) as f:
            raw = f.read()
        data = json.loads(raw)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}")
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}")
    if not isinstance(data, dict):
        raise ParseError("workspace must be a JSON object")
    ring = _parse_ring(data.get("ring", "Z"))
    cfg_data = data.get("config", {})
    config = Config(
        budget_filler=int(cfg_data.get("budget_filler", 8)),
        budget_reindex=int(cfg_data.get("budget_reindex", 8)),
        lim_window=int(cfg_data.get("lim_window", 24)),
    )
    config.validate()
    ws = Workspace(ring=ring, config=config)
    seen = set()

    def claim(name):
        if name in seen:
            raise ValidationError(f"duplicate object name '{name}'")
        seen.add(name)

    for name, d in data.get("complexes", {}).items():
        claim(name)
        ws.complexes[name] = _parse_complex(name, d, ring)
    for name, d in data.get("maps", {}).items():
        claim(name)
        ws.maps[name] = _parse_chain_map(name, d, ws)
    for name, d in data.get("groups", {}).items():
        claim(name)
        ws.groups[name] = _parse_group(name, d, ring)
    for name, d in data.get("group_maps", {}).items():
        claim(name)
        ws.group_maps[name] = _parse_group_map(name, d, ws)
    for name, d in data.get("towers", {}).items():
        claim(name)
        ws.towers[name] = _parse_tower(name, d, ws.complexes, ws.maps, "complex")
    for name, d in data.get("group_towers", {}).items():
        claim(name)
        ws.group_towers[name] = _parse_tower(name, d, ws.groups, ws.group_maps,
                                             "group")
    for name, d in data.get("promaps", {}).items():
        claim(name)
        ws.promaps[name] = _parse_promap(name, d, ws.towers, ws.maps)
    for name, d in data.get("group_promaps", {}).items():
        claim(name)
        ws.group_promaps[name] = _parse_promap(name, d, ws.group_towers,
                                               ws.group_maps)
    # stash raw names for serialization
    ws._raw = data
    return ws


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------

def _matrix_json(m: IntMatrix):
    return [[str(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def _stringify_matrix(data):
    return [[str(int(x)) for x in row] for row in data]


def serialize_workspace(ws: Workspace) -> str:
    """Canonical form: sorted keys, two-space indent, string matrix entries.

    Normalizes the parsed document rather than reconstructing it, so the
    output is idempotent: serialize(parse(serialize(parse(f)))) equals
    serialize(parse(f)) byte for byte.
    """
    raw = getattr(ws, "_raw", {})
    out = {}
    out["ring"] = "Z" if not ws.ring.is_field else {"p": ws.ring.p}
    out["config"] = {
        "budget_filler": ws.config.budget_filler,
        "budget_reindex": ws.config.budget_reindex,
        "lim_window": ws.config.lim_window,
    }
    if raw.get("complexes"):
        out["complexes"] = {
            name: {
                "ranks": {str(k): int(v) for k, v in d.get("ranks", {}).items()},
                "diffs": {str(k): _stringify_matrix(m)
                          for k, m in d.get("diffs", {}).items()},
            }
            for name, d in raw["complexes"].items()
        }
    if raw.get("maps"):
        out["maps"] = {
            name: {
                "source": d["source"],
                "target": d["target"],
                "comps": {str(k): _stringify_matrix(m)
                          for k, m in d.get("comps", {}).items()},
            }
            for name, d in raw["maps"].items()
        }
    if raw.get("groups"):
        out["groups"] = {
            name: {
                "generators": int(d.get("generators", 0)),
                "relations": [[str(int(x)) for x in rel]
                              for rel in d.get("relations", [])],
            }
            for name, d in raw["groups"].items()
        }
    if raw.get("group_maps"):
        out["group_maps"] = {
            name: {
                "source": d["source"],
                "target": d["target"],
                "matrix": _stringify_matrix(d.get("matrix", [])),
            }
            for name, d in raw["group_maps"].items()
        }
    for section in ("towers", "group_towers"):
        if raw.get(section):
            out[section] = {
                name: {
                    "entries": list(d.get("entries", [])),
                    "structure": list(d.get("structure", [])),
                    "tail": {k: (v if k == "endo" else int(v))
                             for k, v in d.get("tail", {}).items()},
                }
                for name, d in raw[section].items()
            }
    for section in ("promaps", "group_promaps"):
        if raw.get(section):
            out[section] = {
                name: {
                    "source": d["source"],
                    "target": d["target"],
                    "comps": list(d.get("comps", [])),
                }
                for name, d in raw[section].items()
            }
    return json.dumps(out, indent=2, sort_keys=True) + "\n"
