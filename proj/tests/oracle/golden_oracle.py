#!/usr/bin/env python3
"""Independent reference for the end-to-end discovery run.

Recomputes the pipeline output from the raw CSV using exact arithmetic:
naive Bayes scores as Fractions over raw counts, Pearson r as a two-pass
mean-centered covariance evaluated with Fractions and a 50-digit Decimal
square root. Shares no code with the C++ library.

usage: golden_oracle.py SCHEMA CSV REQUIREMENT [--alpha A] [--threshold T]
                        [--min-overlap N]
"""

import argparse
import csv
import decimal
import json
import math
import sys
from fractions import Fraction


def parse_schema(path):
    conf = {}
    for raw in open(path, encoding="utf-8"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        conf[key] = [v.strip() for v in value.split(",") if v.strip()]
    levels = conf["levels"]
    categorical = [(a, conf.get("levels." + a, levels)) for a in conf["categorical"]]
    numeric = [tuple(n.split(":", 1)) for n in conf["numeric"]]
    return conf["classes"], categorical, numeric


def report(x):
    return float("%.10g" % x)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("schema")
    ap.add_argument("csv")
    ap.add_argument("requirement")
    ap.add_argument("--alpha", type=Fraction, default=Fraction(1))
    ap.add_argument("--threshold", type=float, default=0.997)
    ap.add_argument("--min-overlap", type=int, default=3)
    args = ap.parse_args()

    classes, categorical, numeric = parse_schema(args.schema)
    with open(args.csv, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    req = json.load(open(args.requirement, encoding="utf-8"))
    alpha = args.alpha

    # Bayes: exact products of count ratios.
    total = len(rows)
    scores = {}
    for c in classes:
        members = [r for r in rows if r["class"] == c]
        n_c = len(members)
        if n_c == 0:
            scores[c] = Fraction(0)
            continue
        s = Fraction(n_c, total)
        for attr, vocab in categorical:
            if attr not in req["categorical"]:
                continue
            want = req["categorical"][attr]
            hits = sum(1 for r in members if r[attr] == want)
            s *= (hits + alpha) / (n_c + alpha * len(vocab))
        scores[c] = s

    prior = {c: sum(1 for r in rows if r["class"] == c) for c in classes}
    best = max(classes, key=lambda c: (scores[c], prior[c], -classes.index(c)))
    z = sum(scores.values())
    log_scores = {c: (report(math.log(s.numerator) - math.log(s.denominator)) if s > 0 else None)
                  for c, s in scores.items()}
    posteriors = {c: report(float(s / z)) for c, s in scores.items()}

    # Pearson over pairwise-complete numeric attributes.
    decimal.getcontext().prec = 50
    qnum = {k: float(v) for k, v in req["numeric"].items()}
    results = []
    aligned = {}
    for r in rows:
        if r["class"] != best:
            continue
        pairs = [(name, unit, qnum[name], float(r[name + "_" + unit]))
                 for name, unit in numeric
                 if name in qnum and r[name + "_" + unit] != ""]
        aligned[r["id"]] = pairs
        if len(pairs) < args.min_overlap:
            results.append({"material_id": r["id"], "r": None, "status": "InsufficientOverlap"})
            continue
        xs = [Fraction(p[2]) for p in pairs]
        ys = [Fraction(p[3]) for p in pairs]
        mx = sum(xs) / len(xs)
        my = sum(ys) / len(ys)
        cov = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
        vx = sum((a - mx) ** 2 for a in xs)
        vy = sum((b - my) ** 2 for b in ys)
        if vx == 0 or vy == 0:
            results.append({"material_id": r["id"], "r": None, "status": "UndefinedCorrelation"})
            continue
        d = lambda f: decimal.Decimal(f.numerator) / decimal.Decimal(f.denominator)
        rv = float(d(cov) / (d(vx) * d(vy)).sqrt())
        status = "Ranked" if rv >= args.threshold else "BelowThreshold"
        results.append({"material_id": r["id"], "r": rv, "status": status})

    ranked = sorted((x for x in results if x["status"] == "Ranked"),
                    key=lambda x: (-x["r"], x["material_id"]))
    rest = [x for x in results if x["status"] != "Ranked"]
    out_results = []
    for i, x in enumerate(ranked, 1):
        out_results.append({**x, "rank": i, "r": report(x["r"])})
    for x in rest:
        out_results.append({**x, "rank": None, "r": None if x["r"] is None else report(x["r"])})

    optimal = ranked[0]["material_id"] if ranked else None
    comparison = None
    if optimal is not None:
        comparison = [{"attribute": n, "unit": u, "requirement": q, "material": m}
                      for n, u, q, m in aligned[optimal]]

    doc = {
        "prediction": {"predicted": best, "posteriors": posteriors, "log_scores": log_scores},
        "class_member_count": prior[best],
        "results": out_results,
        "optimal": optimal,
        "comparison": comparison,
        "params": {"threshold": args.threshold, "min_overlap": args.min_overlap,
                   "top_k": None, "normalize": False},
    }
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
