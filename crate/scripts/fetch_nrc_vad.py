#!/usr/bin/env python3
"""Assemble data/NRC-VAD-Lexicon.txt from the per-dimension English files
redistributed inside the `shifterator` wheel on PyPI.

Output layout matches the original NRC release: a `Word Valence Arousal
Dominance` header followed by one tab-separated row per term, sorted.
"""
import pathlib
import subprocess
import sys
import tempfile
import zipfile

DIMS = ("valence", "arousal", "dominance")


def main() -> int:
    root = pathlib.Path(__file__).resolve().parent.parent
    out = root / "data" / "NRC-VAD-Lexicon.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "-q",
             "-d", tmp, "shifterator==0.3.0"],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("shifterator-*.whl"))
        scores: dict[str, dict[str, str]] = {}
        with zipfile.ZipFile(wheel) as z:
            for dim in DIMS:
                name = f"shifterator/lexicons/NRC-VAD/NRC-VAD_{dim}_English.tsv"
                for line in z.read(name).decode("utf-8").splitlines():
                    if not line.strip():
                        continue
                    term, value = line.split("\t")
                    scores.setdefault(term, {})[dim] = value
    rows = [t for t in sorted(scores) if len(scores[t]) == 3]
    with out.open("w", encoding="utf-8", newline="\n") as f:
        f.write("Word\tValence\tArousal\tDominance\n")
        for t in rows:
            f.write(t + "\t" + "\t".join(scores[t][d] for d in DIMS) + "\n")
    print(f"wrote {len(rows)} terms to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
