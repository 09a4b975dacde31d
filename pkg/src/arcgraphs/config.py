"""
Configuration – loads all settings from environment / .env file.

Every field has a default, so no environment variable is required.
Variables use the ``ARCGRAPHS_`` prefix, e.g. ``ARCGRAPHS_GEODESIC_CAP=5000``.
"""

from __future__ import annotations

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="ARCGRAPHS_",
        case_sensitive=False,
        extra="ignore",
    )

    # ── Resource guards ────────────────────────────────────────────────────
    vertex_cap: int = Field(1_000_000, description="Max vertices a single build may create")
    geodesic_cap: int = Field(1_000_000, description="Overflow threshold for all_geodesics")
    search_cap: int = Field(
        200_000,
        description="Max states visited by bounded searches (connect, ball BFS, flip search)",
    )
    automorphism_node_cap: int = Field(
        2_000_000, description="Max backtracking nodes in the automorphism search"
    )

    # ── Normal-coordinate backend ──────────────────────────────────────────
    flip_search_depth: int = Field(
        4, description="Depth of the fallback flip search when no single flip shortens an arc"
    )
    closure_cap: int = Field(
        5_000, description="Max triangulations visited by the enumeration completeness check"
    )
    default_arc_bound: int = Field(6, description="Default coordinate-sum bound for arc pools")
    default_radius: int = Field(2, description="Default radius of ball-mode graphs")

    # ── Sweeps ─────────────────────────────────────────────────────────────
    workers: int = Field(1, description="Worker-pool size for embarrassingly parallel sweeps")
    sample_pairs: int = Field(10_000, description="Convexity-sweep pairs when --sample is absent")
    random_paths: int = Field(1_000, description="Random paths per instance in surgery sweeps")
    max_twist: int = Field(5, description="Twist iterations sampled by twist growth")

    # ── Logging / CLI ──────────────────────────────────────────────────────
    log_level: str = Field("INFO", description="Python logging level")

    @field_validator("log_level", mode="before")
    @classmethod
    def normalise_level(cls, v: str) -> str:
        return str(v).upper()

    @field_validator("workers", "flip_search_depth", mode="after")
    @classmethod
    def at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be >= 1")
        return v


# Singleton – import this everywhere
settings = Settings()
