"""Thin-wire PEEC solver for RIS-aided wireless links."""

from rispeec._core import (
    ConfigError,
    CutPlane,
    Dipole,
    LoadConstraint,
    NumericalError,
    OptParams,
    OptResult,
    PartialElements,
    PatternCut,
    PortNetwork,
    PortRole,
    Scenario,
    ScenarioConfig,
    SimulationContext,
    WireMesh,
    achievable_rate,
    assemble_partial_elements,
    build_context,
    extract_zsys,
    mesh_scenario,
    optimize,
    paper_scenario,
    paper_scenario_config,
    parse_scenario_file,
    parse_scenario_text,
    scattered_pattern,
    solve_currents,
)

__all__ = [
    "ConfigError",
    "CutPlane",
    "Dipole",
    "LoadConstraint",
    "NumericalError",
    "OptParams",
    "OptResult",
    "PartialElements",
    "PatternCut",
    "PortNetwork",
    "PortRole",
    "Scenario",
    "ScenarioConfig",
    "SimulationContext",
    "WireMesh",
    "achievable_rate",
    "assemble_partial_elements",
    "build_context",
    "extract_zsys",
    "mesh_scenario",
    "optimize",
    "paper_scenario",
    "paper_scenario_config",
    "parse_scenario_file",
    "parse_scenario_text",
    "scattered_pattern",
    "solve_currents",
]
