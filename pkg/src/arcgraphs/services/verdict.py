"""
verdict.py – Machine-readable outcomes of property checks and bounded counts.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field, computed_field


class Verdict(BaseModel):
    """Outcome of one asserted property on one instance."""

    check: str
    instance: str
    holds: bool
    witnesses: list[Any] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)


class CountReport(BaseModel):
    """An observed count compared against a promised bound."""

    instance: str
    observed: int
    bound: int
    relation: Literal["at_most", "at_least"] = "at_most"
    witnesses: list[Any] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def within_bound(self) -> bool:
        if self.relation == "at_most":
            return self.observed <= self.bound
        return self.observed >= self.bound
