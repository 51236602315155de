from pathlib import Path

import pytest

from traitnorm.dumpio import dump
from traitnorm.ingest import load, load_mapping
from traitnorm.normalize import load_config, run_pipeline

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "northwind"


@pytest.fixture(scope="session")
def northwind_ingest():
    mapping = load_mapping(DATA_DIR / "mapping.yaml")
    return load(mapping, DATA_DIR)


@pytest.fixture(scope="session")
def northwind_pre(northwind_ingest):
    return northwind_ingest[0]


@pytest.fixture(scope="session")
def northwind_config():
    return load_config(DATA_DIR / "normalize.yaml")


@pytest.fixture(scope="session")
def northwind_result(northwind_pre, northwind_config):
    # run_pipeline works on a copy, so northwind_pre stays pristine
    return run_pipeline(northwind_pre, northwind_config)


@pytest.fixture(scope="session")
def northwind_dumps(tmp_path_factory, northwind_pre, northwind_result):
    """(pre_path, post_path) dump pair for CLI and workload tests."""
    out = tmp_path_factory.mktemp("dumps")
    pre_path = out / "pre.jsonl"
    post_path = out / "post.jsonl"
    dump(northwind_pre, pre_path)
    dump(northwind_result.graph, post_path)
    return pre_path, post_path
