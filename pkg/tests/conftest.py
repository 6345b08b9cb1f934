"""Shared fixtures: the production-line model and its solved pipeline."""

from pathlib import Path

import pytest

from netsup import build_comm_automaton, load_model, solve_control_problem

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def models_dir() -> Path:
    return MODELS


@pytest.fixture(scope="session")
def line_model():
    return load_model(MODELS / "production_line.json")


@pytest.fixture(scope="session")
def line_comm(line_model):
    return build_comm_automaton(line_model.plant, line_model.spec, line_model.network)


@pytest.fixture(scope="session")
def line_report(line_model):
    return solve_control_problem(line_model.plant, line_model.spec, line_model.network)


@pytest.fixture(scope="session")
def no_feedback_model():
    return load_model(MODELS / "production_line_no_ch21.json")


@pytest.fixture(scope="session")
def no_feedback_comm(no_feedback_model):
    m = no_feedback_model
    return build_comm_automaton(m.plant, m.spec, m.network)


@pytest.fixture(scope="session")
def minimal_model():
    return load_model(MODELS / "minimal.json")
