#!/usr/bin/env python3
"""Recompute the recorded calibration constants from the fixed seeded runs.

Prints a CALIBRATION dict ready to paste into gaborlab/calibration.py.
Run after any intentional change to the seeded corpora.
"""

import json
import sys

from gaborlab import calibration
from gaborlab.basic_sequences import (
    WeightSequence,
    flat_cells_coefficients,
    verify_cells,
    verify_peaks,
)
from gaborlab.grids import Exponent
from gaborlab.suites import (
    lacunary_suite,
    rdf_suite,
    squarefunc_suite,
    type_cotype_suite,
)


def main() -> None:
    cfg = calibration.RECORDED_CONFIG
    seed = cfg["seed"]
    out = {}

    rep, _ = squarefunc_suite(seed, families=cfg["squarefunc"]["families"])
    out["squarefunc"] = {
        "1.5": rep.metrics["ratio_max_p1.5"],
        "1.5_lo": rep.metrics["ratio_min_p1.5"],
        "2.0": rep.metrics["ratio_max_p2.0"],
        "2.0_lo": rep.metrics["ratio_min_p2.0"],
        "3.0": rep.metrics["ratio_max_p3.0"],
        "4.0": rep.metrics["ratio_max_p4.0"],
    }

    rep, _ = type_cotype_suite(seed, families=cfg["type_cotype"]["families"])
    out["type_cotype"] = {
        k.removesuffix("_max"): v for k, v in rep.metrics.items()
    }

    rep, _ = lacunary_suite(seed, trials=cfg["lacunary"]["trials"])
    out["lacunary"] = {
        "p4.0": {"lo": rep.metrics["ratio_min"], "hi": rep.metrics["ratio_max"]}
    }

    rep, _ = rdf_suite(seed, corpus=cfg["rdf"]["corpus"])
    out["rdf"] = {
        "p3.0": rep.metrics["c_observed_p3.0"],
        "p4.0": rep.metrics["c_observed_p4.0"],
    }

    pk = cfg["peaks"]
    weights = WeightSequence.polynomial(pk["alpha"], Exponent(pk["p"]), length=pk["K"])
    rep, _ = verify_peaks(
        weights, Exponent(pk["p"]), pk["J"], pk["K"], pk["trials"], seed
    )
    out["peaks"] = {
        "ratio": [rep.ratio_min, rep.ratio_max],
        "local": [rep.local_ratio_min, rep.local_ratio_max],
    }

    cl = cfg["cells"]
    c = flat_cells_coefficients(cl["K"], Exponent(cl["p"]))
    rep, _ = verify_cells(c, Exponent(cl["p"]), cl["K"], cl["n_max"], cl["trials"], seed)
    out["cells"] = {"ratio": [rep.ratio_min, rep.ratio_max]}

    json.dump(out, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
