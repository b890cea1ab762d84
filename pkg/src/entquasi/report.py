"""Serialization of analysis results to JSON and CSV."""

from __future__ import annotations

import csv
import io
import json

import numpy as np


def _f(x):
    return format(float(x), ".17g")


def _seq(xs):
    return ";".join(str(int(x)) for x in xs)


def solution_records(solutions):
    return [
        {
            "k": k,
            "support": list(s.support),
            "e": list(s.e),
            "root_signs": list(s.root_signs),
            "g": s.g,
            "a_re": s.amplitudes.real.tolist(),
            "a_im": s.amplitudes.imag.tolist(),
            "residual": s.residual,
        }
        for k, s in enumerate(solutions, start=1)
    ]


def solutions_json(solutions):
    return json.dumps(solution_records(solutions), indent=2) + "\n"


def report_dict(report):
    qp = report.quasiprob
    rec = report.reconstruction
    return {
        "state_meta": report.state.meta.as_dict(),
        "dim": report.state.dim,
        "solutions": solution_records(report.solutions),
        "gram_residual": qp.residual,
        "rank_used": qp.rank_used,
        "selection": qp.selection,
        "weights": qp.weights.tolist(),
        "min_weight": qp.min_weight,
        "negative_indices": [i + 1 for i in qp.negative_indices],
        "negativity": qp.negativity,
        "sum_weights": qp.sum_weights,
        "entangled": bool(qp.entangled),
        "max_se_value": report.max_se_value,
        "trace": rec.trace_original,
        "epsilon": rec.epsilon,
        "off_support_max": rec.off_support_max,
        "inexact": bool(report.inexact),
        "ppt": {"min_eigenvalue": report.ppt["min_eigenvalue"], "entangled": bool(report.ppt["entangled"])},
        "diagnostics": [
            {"support": list(d.support), "e": list(d.e), "reason": d.reason} for d in report.diagnostics
        ],
        "duplicates": [[k + 1, l + 1] for k, l in report.duplicates],
    }


def report_json(report):
    return json.dumps(report_dict(report), indent=2) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def quasiprob_csv(solutions, weights):
    rows = [
        [k, _seq(s.support), _seq(s.e), _seq(s.root_signs), _f(s.g), _f(p)]
        for k, (s, p) in enumerate(zip(solutions, np.asarray(weights)), start=1)
    ]
    return _csv_text(["k", "support", "e", "root_signs", "g", "p"], rows)


def phase_csv(phi, pdf):
    return _csv_text(["phi", "pdf"], [[_f(x), _f(y)] for x, y in zip(phi, pdf)])


SWEEP_HEADER = ["sigma", "min_weight", "epsilon", "ppt_min_eig"]


def sweep_csv(rows):
    return _csv_text(SWEEP_HEADER, [[_f(v) for v in row] for row in rows])
