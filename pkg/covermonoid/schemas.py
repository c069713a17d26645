import json
from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, PrivateAttr

from .abelian_group import FiniteAbelianGroup, GroupHomomorphism, invariant_factors
from .cover_monoid import Ray, h_of_ray, is_smooth_ray, pair_label


# Integers travel as decimal strings, rationals as "p/q"
def _s(value) -> str:
    return str(value)


def _s_list(values) -> List[str]:
    return [str(v) for v in values]


# --- Groups and lattices ---
class GroupOut(BaseModel):
    spec: str
    order: str
    invariant_factors: List[str]

    @classmethod
    def of(cls, M: FiniteAbelianGroup) -> "GroupOut":
        return cls(spec=M.spec, order=_s(M.size), invariant_factors=_s_list(invariant_factors(M)))


class GeneratorOut(BaseModel):
    pair: str
    k_coordinates: List[str]


class LatticeOut(BaseModel):
    group: GroupOut
    rank: str
    k_basis: List[List[str]]
    generators: List[GeneratorOut]


class PresentationOut(BaseModel):
    group: GroupOut
    variables: List[str]
    relations: List[str]

    def to_text(self) -> str:
        return "\n".join(self.relations)


# --- Rays ---
class RayOut(BaseModel):
    index: Optional[str] = None
    dual: List[str]
    denominator: str
    e_values: Dict[str, str]
    generator_values: Dict[str, str]
    support_size: str
    h: str
    smooth: Optional[bool] = None

    @classmethod
    def of(cls, ray: Ray, index: Optional[int] = None) -> "RayOut":
        return cls(
            index=None if index is None else _s(index),
            dual=_s_list(ray.dual),
            denominator=_s(ray.denominator),
            e_values={m.label(): _s(ray.e_value(m)) for m in ray.group.nonzero_elements()},
            generator_values={pair_label(p): _s(v) for p, v in zip(ray.lattice.pairs, ray.generator_values)},
            support_size=_s(len(ray.support)),
            h=_s(h_of_ray(ray)),
            smooth=None if ray.is_zero() else is_smooth_ray(ray),
        )


def hom_images(phi: GroupHomomorphism) -> List[str]:
    return [x.label() for x in phi.images]


class PardiniRayOut(BaseModel):
    target: str
    images: List[str]
    ray: RayOut


class RaySmoothnessOut(BaseModel):
    index: str
    smooth: bool
    h: str
    support_size: str


class RayListOut(BaseModel):
    group: GroupOut
    rays: List[RayOut]
    checked_against_bruteforce: bool = False


class PardiniListOut(BaseModel):
    group: GroupOut
    rays: List[PardiniRayOut]


class SmoothCheckOut(BaseModel):
    group: GroupOut
    rays: List[RaySmoothnessOut]


# --- Two degrees ---
class OmegaOut(BaseModel):
    beta: str
    N: str
    omega: List[str]
    d_values: List[str]


class GoodPairOut(BaseModel):
    element: str
    E: str
    delta: str


class InvariantsOut(BaseModel):
    r: str
    alpha: str
    N: str
    qbar: str
    qhat: str
    qprime: str
    z: str
    x: str
    y: str
    w: str
    gamma: str
    d_qhat: str
    profile: List[str]
    good_pairs: List[GoodPairOut]


class LambdaDeltaOut(BaseModel):
    r: str
    alpha: str
    N: str
    qbar: str
    lambda_ray: RayOut
    delta_ray: RayOut
    lambda_identified_as: Optional[str] = None
    delta_identified_as: Optional[str] = None


class SigmaDatumOut(BaseModel):
    r: str
    alpha: str
    N: str
    qbar: str
    phi: List[str]
    delta_ray: Optional[RayOut] = None


class SigmaOut(BaseModel):
    group: GroupOut
    strict: bool
    data: List[SigmaDatumOut]


class Theta2Out(BaseModel):
    group: GroupOut
    sequences: List[List[RayOut]]


class NCRowOut(BaseModel):
    row: str
    l: str
    group: str
    m: str
    n: str
    r: str
    alpha: str
    N: str
    qbar: str
    phi: List[str]
    ray: RayOut
    h: str


class NCTableOut(BaseModel):
    group: GroupOut
    rows: List[NCRowOut]


class ClassificationOut(BaseModel):
    field: str
    r: str
    alpha: str
    N: str
    qbar: str
    lam: str
    twist: Dict[str, str]


# --- Stack ---
class HReportOut(BaseModel):
    group: GroupOut
    H: List[str]
    h: str
    level1: bool
    level2: bool


class IrreducibilityOut(BaseModel):
    group: GroupOut
    verdict: str
    reason: str
    certificate: Optional[List[str]] = None


class SmoothnessVerdictOut(BaseModel):
    group: GroupOut
    smooth: bool
    witness: Optional[List[str]] = None
    relation: Optional[str] = None


class FanOut(BaseModel):
    lattice_rank: str
    rays: List[List[str]]
    max_cones: List[List[str]]
    _text: str = PrivateAttr(default="")

    @classmethod
    def of(cls, fan) -> "FanOut":
        data = fan.to_json()
        out = cls(
            lattice_rank=_s(data["lattice_rank"]),
            rays=[_s_list(ray) for ray in data["rays"]],
            max_cones=[_s_list(cone) for cone in data["max_cones"]],
        )
        out._text = fan.to_text()
        return out

    def to_text(self) -> str:
        return self._text


# --- Verify ---
class PropertyResult(BaseModel):
    name: str
    passed: bool
    checked: str
    detail: Optional[str] = None


class VerifyReport(BaseModel):
    max_order: str
    prime: str
    passed: bool
    results: List[PropertyResult]


def element_labels(elements) -> List[str]:
    return [x.label() for x in elements]


# --- Rendering ---
def render_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), sort_keys=True, indent=2)


def _cell(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return "" if value is None else str(value)


def render_text(model: BaseModel) -> str:
    """Models with a text format use it; others become a table of their longest row list."""
    if hasattr(model, "to_text"):
        return model.to_text()
    data = model.model_dump()
    lists = [v for v in data.values() if isinstance(v, list) and v and all(isinstance(x, dict) for x in v)]
    rows = max(lists, key=len) if lists else [data]
    df = pd.DataFrame([{k: _cell(v) for k, v in row.items()} for row in rows])
    return df.to_string(index=False)
