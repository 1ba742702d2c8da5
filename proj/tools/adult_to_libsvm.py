#!/usr/bin/env python3
"""Convert UCI adult.data into the 123-feature binary LibSVM layout of a9a.

Continuous attributes are cut into quantile bins (5 bins, or 2 for the
capital columns: zero vs. positive). Categorical attributes are one-hot.
Missing values ("?") set no feature. Label >50K maps to +1, else -1.

usage: adult_to_libsvm.py adult.data out.libsvm
"""
import bisect
import sys

CATEGORIES = {
    "workclass": "Private, Self-emp-not-inc, Self-emp-inc, Federal-gov, Local-gov, State-gov, Without-pay, Never-worked",
    "education": "Bachelors, Some-college, 11th, HS-grad, Prof-school, Assoc-acdm, Assoc-voc, 9th, 7th-8th, 12th, Masters, 1st-4th, 10th, Doctorate, 5th-6th, Preschool",
    "marital-status": "Married-civ-spouse, Divorced, Never-married, Separated, Widowed, Married-spouse-absent, Married-AF-spouse",
    "occupation": "Tech-support, Craft-repair, Other-service, Sales, Exec-managerial, Prof-specialty, Handlers-cleaners, Machine-op-inspct, Adm-clerical, Farming-fishing, Transport-moving, Priv-house-serv, Protective-serv, Armed-Forces",
    "relationship": "Wife, Own-child, Husband, Not-in-family, Other-relative, Unmarried",
    "race": "White, Asian-Pac-Islander, Amer-Indian-Eskimo, Other, Black",
    "sex": "Female, Male",
    "native-country": "United-States, Cambodia, England, Puerto-Rico, Canada, Germany, Outlying-US(Guam-USVI-etc), India, Japan, Greece, South, China, Cuba, Iran, Honduras, Philippines, Italy, Poland, Jamaica, Vietnam, Mexico, Portugal, Ireland, France, Dominican-Republic, Laos, Ecuador, Taiwan, Haiti, Columbia, Hungary, Guatemala, Nicaragua, Scotland, Thailand, Yugoslavia, El-Salvador, Trinadad&Tobago, Peru, Hong, Holand-Netherlands",
}

COLUMNS = [
    ("age", 5), ("workclass", None), ("fnlwgt", 5), ("education", None),
    ("education-num", 5), ("marital-status", None), ("occupation", None),
    ("relationship", None), ("race", None), ("sex", None),
    ("capital-gain", 2), ("capital-loss", 2), ("hours-per-week", 5),
    ("native-country", None),
]


def quantile_cuts(values, bins):
    if bins == 2:
        return [0.5]
    s = sorted(values)
    return [s[(len(s) * q) // bins] for q in range(1, bins)]


def main():
    src, dst = sys.argv[1], sys.argv[2]
    rows = []
    with open(src) as fh:
        for line in fh:
            parts = [p.strip() for p in line.strip().split(",")]
            if len(parts) == 15:
                rows.append(parts)

    cuts = {}
    for c, (name, bins) in enumerate(COLUMNS):
        if bins:
            vals = [float(r[c]) for r in rows if r[c] != "?"]
            cuts[c] = quantile_cuts(vals, bins)

    with open(dst, "w") as out:
        for r in rows:
            feats = []
            base = 1
            for c, (name, bins) in enumerate(COLUMNS):
                if bins:
                    if r[c] != "?":
                        feats.append(base + bisect.bisect_right(cuts[c], float(r[c])))
                    base += bins
                else:
                    cats = [v.strip() for v in CATEGORIES[name].split(",")]
                    if r[c] in cats:
                        feats.append(base + cats.index(r[c]))
                    base += len(cats)
            label = "+1" if r[14].startswith(">50K") else "-1"
            out.write(label + " " + " ".join(f"{f}:1" for f in feats) + "\n")
    print(f"wrote {len(rows)} rows, {base - 1} features")


if __name__ == "__main__":
    main()
