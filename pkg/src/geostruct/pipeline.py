"""End-to-end computation for one configuration, with lazily cached stages."""

from __future__ import annotations

from functools import cached_property
from typing import Dict, Tuple

from .classify import CURVATURE_NAMES, ricci_powers
from .config import RunConfig
from .curvature import CurvatureSet, covariant_derivative, curvature_set, ssnm
from .expr import Expr
from .parser import parse_expr
from .products import dot, tachibana
from .tensor import MetricData, Tensor


class Pipeline:
    def __init__(self, config: RunConfig):
        self.config = config.validate()

    def _parse(self, text: str) -> Expr:
        e = parse_expr(text, self.config.declared_symbols)
        return e.subs_zero(self.config.zero_symbols) if self.config.zero_symbols else e

    @cached_property
    def metric(self) -> MetricData:
        return MetricData([self._parse(t) for t in self.config.metric_diagonal])

    @cached_property
    def p_vector(self):
        return [self._parse(t) for t in self.config.p_vector]

    @cached_property
    def curvatures(self) -> CurvatureSet:
        return curvature_set(ssnm(self.metric, self.p_vector), self.metric)

    @property
    def connection(self):
        return self.curvatures.connection

    @cached_property
    def g(self) -> Tensor:
        return self.metric.tensor()

    def tensor(self, name: str) -> Tensor:
        if name == "Ric":
            return self.curvatures.Ric
        if name == "g":
            return self.g
        return self.curvatures.four_tensors()[name]

    @cached_property
    def nablas(self) -> Dict[str, Tensor]:
        out = {"Ric": covariant_derivative(self.connection, self.curvatures.Ric)}
        for name in CURVATURE_NAMES:
            out[name] = covariant_derivative(self.connection, self.tensor(name))
        return out

    @cached_property
    def dots(self) -> Dict[Tuple[str, str], Tensor]:
        out = {}
        for e in CURVATURE_NAMES:
            for f in CURVATURE_NAMES:
                out[(e, f)] = dot(self.tensor(e), self.tensor(f), self.metric)
        return out

    @cached_property
    def tachibanas(self) -> Dict[Tuple[str, str], Tensor]:
        out = {}
        for z in ("Ric", "g"):
            for f in CURVATURE_NAMES:
                out[(z, f)] = tachibana(self.tensor(z), self.tensor(f), self.metric)
        return out

    @cached_property
    def ric2(self) -> Tensor:
        return ricci_powers(self.curvatures.Ric, self.metric, 2)[2]

    def named_components(self) -> Dict[str, Tensor]:
        """Every computed tensor under the names used in reports and golden files."""
        cs = self.curvatures
        out: Dict[str, Tensor] = {"Gamma": cs.connection.as_tensor(), "R": cs.R, "Ric": cs.Ric}
        for name in ("C", "K", "W", "P"):
            out[name] = self.tensor(name)
        for name, t in self.nablas.items():
            out["nabla" + name] = t
        for (e, f), t in self.dots.items():
            out[f"{e}.{f}"] = t
        for (z, f), t in self.tachibanas.items():
            out[f"Q({z},{f})"] = t
        return out

    def lookup(self, name: str, indices: Tuple[int, ...]) -> Expr:
        if name == "kappa":
            if indices:
                raise KeyError("kappa takes no indices")
            return self.curvatures.kappa
        if "." in name:
            e, f = name.split(".")
            return self.dots[(e, f)][indices]
        if name.startswith("Q(") and name.endswith(")"):
            z, f = name[2:-1].split(",")
            return self.tachibanas[(z, f)][indices]
        if name.startswith("nabla"):
            return self.nablas[name[5:]][indices]
        if name == "Gamma":
            a, i, j = indices
            return self.connection(a, i, j)
        return self.tensor(name)[indices]
