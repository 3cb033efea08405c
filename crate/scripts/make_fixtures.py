#!/usr/bin/env python3
"""Convert UCI tables (Orange `.tab` copies) into the dense 0/1/? fixture format.

Usage: make_fixtures.py ORANGE_DATASETS_DIR OUT_DIR

Encoding rules:
  * 0/1, yes/no, y/n, t/f attributes become one column (1 = 1/yes/y/t);
  * other categorical attributes are one-hot encoded, one column per value;
  * a missing cell ('?' or blank) marks every column derived from it as missing;
  * the class attribute is dropped.
Per-dataset exceptions are listed in DATASETS below.
"""
import os
import sys

TRUE_TOKENS = ("1", "y", "t", "yes")


def load_tab(path):
    with open(path) as f:
        rows = [line.rstrip("\n").split("\t") for line in f]
    header = rows[0]
    data = []
    for r in rows[3:]:
        if not any(x.strip() for x in r):
            continue
        data.append([(r[j].strip() if j < len(r) else "") for j in range(len(header))])
    return header, data


def encode(header, data, drop=(), onehot=(), extra_missing=None, derived=None):
    extra_missing = extra_missing or {}
    cols, labels = [], []
    for j, h in enumerate(header):
        if h in drop:
            continue
        values = [r[j] for r in data]
        missing = {"", "?"} | set(extra_missing.get(h, ()))
        levels = sorted(set(values) - missing)
        if len(levels) == 2 and h not in onehot and any(v in TRUE_TOKENS for v in levels):
            pos = next(v for v in levels if v in TRUE_TOKENS)
            cols.append([None if v in missing else int(v == pos) for v in values])
            labels.append(h)
        else:
            for lv in levels:
                cols.append([None if v in missing else int(v == lv) for v in values])
                labels.append(f"{h}={lv}")
    for name, col in (derived or []):
        cols.append(col)
        labels.append(name)
    return cols, labels


def write(out_dir, name, cols, col_labels, row_labels=None):
    m = len(cols[0])
    with open(os.path.join(out_dir, f"{name}.txt"), "w") as f:
        for i in range(m):
            f.write(" ".join("?" if c[i] is None else str(c[i]) for c in cols) + "\n")
    with open(os.path.join(out_dir, f"{name}.cols"), "w") as f:
        f.write("\n".join(col_labels) + "\n")
    if row_labels:
        with open(os.path.join(out_dir, f"{name}.rows"), "w") as f:
            f.write("\n".join(row_labels) + "\n")
    missing = sum(1 for c in cols for v in c if v is None)
    ones = sum(1 for c in cols for v in c if v == 1)
    print(f"{name}: {m}x{len(cols)} missing={missing} ones={ones}")


def main(src, out):
    os.makedirs(out, exist_ok=True)

    # zoo: 15 boolean attributes, legs == 4, and an all-zero 17th column.
    h, d = load_tab(os.path.join(src, "zoo.tab"))
    legs = h.index("legs")
    cols, labels = encode(h, d, drop=("name", "legs", "type"),
                          derived=[("legs=4", [int(r[legs] == "4") for r in d]),
                                   ("unused", [0] * len(d))])
    write(out, "zoo", cols, labels, [r[0] for r in d])

    h, d = load_tab(os.path.join(src, "voting.tab"))
    cols, labels = encode(h, d, drop=("party",))
    write(out, "votes", cols, labels)

    h, d = load_tab(os.path.join(src, "audiology.tab"))
    cols, labels = encode(h, d, drop=("y",), onehot=("bser",),
                          extra_missing={"bone": ("unmeasured",), "speech": ("unmeasured",)})
    write(out, "audio", cols, labels)

    h, d = load_tab(os.path.join(src, "primary-tumor.tab"))
    cols, labels = encode(h, d, drop=("primary",), onehot=("sex",))
    write(out, "tumor", cols, labels)

    # lymph: every nominal attribute one-hot (yes/no included), ordinal counts dropped.
    h, d = load_tab(os.path.join(src, "lymphography.tab"))
    yes_no = [x for x in h if x not in ("y", "lym_dimin", "lym_enlar", "no_nodes")]
    cols, labels = encode(h, d, drop=("y", "lym_dimin", "lym_enlar", "no_nodes"), onehot=tuple(yes_no))
    write(out, "lymp", cols, labels)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
