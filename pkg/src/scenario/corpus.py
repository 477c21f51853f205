# corpus.py
# ----------------------------------------------------------------
# builtin scenario corpus: one scenario document per file under
# the corpus directory (overridable through the environment)
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import glob
import logging
import os
from typing import List, Optional

from src import config
from src.domain.catalog import MethodCatalog
from src.errors import ScenarioError
from src.scenario.parser import parse_scenario
from src.scenario.script import Scenario

log = logging.getLogger(__name__)

DATASETS = ("droidbench", "iccta", "ourdev", "realworld", "extra")


def corpus_dir() -> str:
    return os.environ.get(config.CORPUS_ENV) or config.CORPUS_DIR


def corpus_files(directory: Optional[str] = None) -> List[str]:
    return sorted(glob.glob(os.path.join(directory or corpus_dir(), f"*{config.SCENARIO_SUFFIX}")))


def load_file(path: str, catalog: Optional[MethodCatalog] = None) -> Scenario:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        return parse_scenario(text, catalog)
    except ScenarioError as e:
        raise ScenarioError(f"{os.path.basename(path)}: {e.message}", e.line, e.field) from None


def builtin_corpus(directory: Optional[str] = None, catalog: Optional[MethodCatalog] = None) -> List[Scenario]:
    """Every scenario of the corpus directory, ordered by file name."""
    scenarios = [load_file(path, catalog) for path in corpus_files(directory)]
    log.debug("loaded %d corpus scenario(s)", len(scenarios))
    return scenarios


def find_scenario(name: str, directory: Optional[str] = None,
                  catalog: Optional[MethodCatalog] = None) -> Optional[str]:
    """Path of the corpus file holding scenario `name` (file stem first, then declared names)."""
    files = corpus_files(directory)
    for path in files:
        if os.path.splitext(os.path.basename(path))[0] == name:
            return path
    for path in files:
        if load_file(path, catalog).name == name:
            return path
    return None
