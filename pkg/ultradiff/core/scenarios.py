#!/usr/bin/env python3
"""
Scenario and run configuration
Config-file backed scenario definitions and their manager
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError, UltradiffError
from .hierarchy import Kernel, UltrametricHierarchy, make_perturbed, make_self_similar
from .tree import MAX_ORACLE_POINTS, FiniteTree, hierarchy_tree, make_tree, make_uniform_tree

SCENARIO_SUFFIXES = (".yaml", ".yml", ".json")


class ScenarioConfig(BaseModel):
    """One hierarchy with its kernel; field names follow the scenario file format"""
    model_config = ConfigDict(extra='forbid')

    name: str = "scenario"
    type: Literal["self_similar", "perturbed", "tree"]
    alpha: float = Field(gt=0)
    p: Optional[int] = None
    xi: Optional[float] = None
    delta: Optional[List[float]] = None
    epsilon: Optional[List[float]] = None
    extend: Optional[Literal["cycle", "hold"]] = None
    repair: bool = False
    levels: Optional[int] = Field(default=None, ge=1)
    branching: Optional[Any] = None
    level_distance: Optional[List[float]] = None
    depth: int = Field(default=8, ge=1)
    sink_rate: float = Field(default=1.0, ge=0)

    @model_validator(mode='after')
    def check_type_fields(self) -> 'ScenarioConfig':
        if self.type in ("self_similar", "perturbed"):
            if self.p is None or self.xi is None:
                raise ValueError(f"{self.type} scenario needs p and xi")
            if self.p < 2 or not self.xi > 0:
                raise ValueError("p must be >= 2 and xi positive")
        if self.type == "perturbed" and (self.delta is None or self.epsilon is None):
            raise ValueError("perturbed scenario needs delta and epsilon sequences")
        if self.type == "tree":
            if self.branching is None or self.level_distance is None:
                raise ValueError("tree scenario needs branching and level_distance")
        return self

    def build_hierarchy(self) -> UltrametricHierarchy:
        if self.type == "self_similar":
            return make_self_similar(self.p, self.xi)
        if self.type == "perturbed":
            return make_perturbed(self.p, self.xi, self.delta, self.epsilon,
                                  levels=self.levels, repair=self.repair, extend=self.extend)
        return self.build_tree().induced_hierarchy(0)

    def build_kernel(self) -> Kernel:
        return Kernel(alpha=self.alpha)

    def build_tree(self) -> FiniteTree:
        """Finite realization for the oracle: the tree itself, or the hierarchy cut at `depth`"""
        if self.type == "tree":
            return make_tree(self.branching, self.level_distance, name=self.name)
        if self.type == "self_similar":
            return make_uniform_tree(self.p, self.depth, self.xi)
        return hierarchy_tree(self.build_hierarchy(), self.depth)

    @property
    def is_finite(self) -> bool:
        return self.type == "tree"


class TGrid(BaseModel):
    """Log-spaced time grid"""
    model_config = ConfigDict(extra='forbid')

    t_min: float = Field(default=0.1, gt=0)
    t_max: float = Field(default=1e3, gt=0)
    points_per_decade: int = Field(default=10, ge=4)

    @model_validator(mode='after')
    def check_range(self) -> 'TGrid':
        if not self.t_max > self.t_min:
            raise ValueError("t_max must exceed t_min")
        return self

    def points(self) -> np.ndarray:
        decades = math.log10(self.t_max / self.t_min)
        count = max(2, int(round(decades * self.points_per_decade)) + 1)
        return np.logspace(math.log10(self.t_min), math.log10(self.t_max), count)


class Tolerances(BaseModel):
    model_config = ConfigDict(extra='forbid')

    series: float = Field(default=1e-12, gt=0)
    poles: float = Field(default=1e-14, gt=0)
    survival: float = Field(default=1e-8, gt=0)
    oracle: float = Field(default=1e-8, gt=0)


class RunConfig(BaseModel):
    """Scenario plus everything a CLI run needs"""
    model_config = ConfigDict(extra='forbid')

    scenario: ScenarioConfig
    t_grid: TGrid = Field(default_factory=TGrid)
    asym_grid: TGrid = Field(default_factory=lambda: TGrid(t_min=1e3, t_max=1e7, points_per_decade=20))
    oracle_times: List[float] = Field(default_factory=lambda: [0.1, 1.0, 10.0, 100.0])
    spheres: int = Field(default=4, ge=0)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    walkers: int = Field(default=100_000, ge=1)
    mc_times: List[float] = Field(default_factory=lambda: [0.5, 5.0])
    poles: int = Field(default=40, ge=1)
    output: Optional[str] = None

    @property
    def alpha(self) -> float:
        return self.scenario.alpha

    @property
    def sink_rate(self) -> float:
        return self.scenario.sink_rate

    def config_hash(self) -> str:
        canonical = json.dumps(self.model_dump(mode='json'), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def _read_file(path: Path) -> Dict[str, Any]:
    if path.suffix not in SCENARIO_SUFFIXES:
        raise ConfigError(f"unsupported config format {path.suffix!r} ({path})")
    try:
        with open(path, 'r') as f:
            data = json.load(f) if path.suffix == ".json" else yaml.safe_load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must hold a mapping")
    return data


def run_config_from_dict(data: Dict[str, Any], name: Optional[str] = None) -> RunConfig:
    """Accepts a nested {'scenario': {...}} document or a flat scenario with run keys beside it"""
    data = dict(data)
    if 'scenario' not in data:
        run_keys = set(RunConfig.model_fields) - {'scenario'}
        scenario = {k: v for k, v in data.items() if k not in run_keys}
        data = {k: v for k, v in data.items() if k in run_keys}
        data['scenario'] = scenario
    if name and isinstance(data['scenario'], dict):
        data['scenario'].setdefault('name', name)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first['loc']) or "config"
        raise ConfigError(f"invalid configuration at {where}: {first['msg']}") from e


def load_run_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    return run_config_from_dict(_read_file(path), name=path.stem)


class ScenarioManager:
    """Scenario manager - loads run configurations from a config directory"""

    def __init__(self, scenarios_dir: Optional[Path] = None):
        self.scenarios_dir = Path(scenarios_dir or "configs/scenarios")
        self.scenarios: Dict[str, RunConfig] = {}

    def _file_for(self, name: str) -> Optional[Path]:
        for suffix in SCENARIO_SUFFIXES:
            candidate = self.scenarios_dir / f"{name}{suffix}"
            if candidate.exists():
                return candidate
        return None

    def load_all(self) -> Dict[str, RunConfig]:
        self.scenarios.clear()
        for name in self.list():
            config = self.load(name)
            if config:
                self.scenarios[name] = config
        return self.scenarios

    def load(self, name: str) -> Optional[RunConfig]:
        path = self._file_for(name)
        if path is None:
            print(f"⚠️  Scenario not found: {name}")
            return None
        try:
            config = load_run_config(path)
        except UltradiffError as e:
            print(f"❌ Failed to load scenario {name}: {e}")
            return None
        self.scenarios[name] = config
        return config

    def get(self, name: str) -> Optional[RunConfig]:
        if name not in self.scenarios:
            self.load(name)
        return self.scenarios.get(name)

    def list(self) -> List[str]:
        found = [p.stem for p in self.scenarios_dir.glob("*") if p.suffix in SCENARIO_SUFFIXES]
        return sorted(set(list(self.scenarios) + found))

    def save(self, config: RunConfig, name: Optional[str] = None) -> bool:
        name = name or config.scenario.name
        try:
            self.scenarios_dir.mkdir(parents=True, exist_ok=True)
            path = self.scenarios_dir / f"{name}.yaml"
            with open(path, 'w') as f:
                yaml.safe_dump(config.model_dump(mode='json', exclude_none=True), f,
                               default_flow_style=False, sort_keys=False)
            self.scenarios[name] = config
            print(f"💾 Saved scenario: {name}")
            return True
        except OSError as e:
            print(f"❌ Failed to save scenario {name}: {e}")
            return False

    def validate(self, config: RunConfig) -> List[str]:
        """Problems that only show once the hierarchy is built"""
        errors = []
        scenario = config.scenario
        try:
            h = scenario.build_hierarchy()
        except UltradiffError as e:
            return [f"hierarchy: {e}"]
        if scenario.is_finite and config.spheres > h.max_level:
            errors.append(f"spheres={config.spheres} exceeds tree depth {h.max_level}")
        if not scenario.is_finite and h.asym is None:
            errors.append("infinite scenario without asymptotic parameters")
        depth = h.max_level if scenario.is_finite else scenario.depth
        if not h.has_level(depth):
            errors.append(f"oracle depth {depth} exceeds the {h.max_level} tabulated levels")
            return errors
        try:
            points = h.N(depth)
        except UltradiffError as e:
            return errors + [f"hierarchy: {e}"]
        if points > MAX_ORACLE_POINTS:
            errors.append(f"oracle depth {scenario.depth} gives {points} points, above {MAX_ORACLE_POINTS}")
        return errors
