#!/usr/bin/env python3
"""Line coverage of the core library from gcov data.

Runs gcov in JSON mode over the instrumented core objects, counts executable
lines of core/src/*.cpp only, writes a summary file and exits nonzero when
coverage is below the threshold.
"""
import argparse
import gzip
import json
import pathlib
import subprocess
import sys


def gcov_lines(obj_dir: pathlib.Path, src_dir: pathlib.Path):
    lines = {}
    for gcda in sorted(obj_dir.glob("*.gcda")):
        out = subprocess.run(
            ["gcov", "--json-format", "--stdout", "-o", str(obj_dir), str(gcda)],
            check=True, capture_output=True, cwd=obj_dir,
        ).stdout
        if out[:2] == b"\x1f\x8b":
            out = gzip.decompress(out)
        for chunk in out.decode().splitlines():
            if not chunk.strip():
                continue
            for f in json.loads(chunk)["files"]:
                path = pathlib.Path(f["file"])
                if not path.is_absolute():
                    path = (obj_dir / path).resolve()
                if path.parent != src_dir:
                    continue
                per_file = lines.setdefault(path.name, {})
                for line in f["lines"]:
                    n = line["line_number"]
                    per_file[n] = per_file.get(n, 0) + line["count"]
    return lines


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--objects", required=True, type=pathlib.Path)
    ap.add_argument("--sources", required=True, type=pathlib.Path)
    ap.add_argument("--summary", required=True, type=pathlib.Path)
    ap.add_argument("--threshold", type=float, default=90.0)
    args = ap.parse_args()

    lines = gcov_lines(args.objects, args.sources.resolve())
    if not lines:
        print("no coverage data under", args.objects)
        return 1
    total = covered = 0
    report = []
    for name in sorted(lines):
        t = len(lines[name])
        c = sum(1 for count in lines[name].values() if count > 0)
        total += t
        covered += c
        report.append(f"{name}: {c}/{t} {100.0 * c / t:.1f}%")
    percent = 100.0 * covered / total
    summary = (f"line_coverage_percent: {percent:.2f}\n"
               f"lines_covered: {covered}\nlines_total: {total}\n"
               + "".join(f"file {r}\n" for r in report))
    args.summary.write_text(summary)
    print(summary, end="")
    return 0 if percent >= args.threshold else 1


if __name__ == "__main__":
    sys.exit(main())
