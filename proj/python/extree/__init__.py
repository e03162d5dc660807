"""Extremal tree models: simulation, rank-based estimators and tree learning."""

import csv
import io
import json

from ._core import (
    ExtreeError,
    Model,
    __version__,
    chi_hat_matrix,
    default_k,
    fit_hr_tree_json,
    gamma_hat,
    hr_chi_from_gamma,
    is_conditionally_negative_definite,
    learn_tree,
    model_variogram,
    mst,
    parse_csv,
    random_tree,
    rank_transform,
    run_experiment_csv,
    run_pipeline_json,
    sample_domain_of_attraction,
    sample_max_stable,
    validate_tree,
    version,
)


def fit_hr_tree(x, k=None):
    return json.loads(fit_hr_tree_json(x, k))


def run_pipeline(x, names=(), q=0.05, bootstrap=0, seed=0, threads=1):
    return json.loads(run_pipeline_json(x, list(names), q, bootstrap, seed, threads))


def run_experiment(config, threads=1):
    """`config` is a dict in the experiment config schema. Returns one dict per CSV row."""
    text = run_experiment_csv(json.dumps(config), threads)
    return list(csv.DictReader(io.StringIO(text)))
