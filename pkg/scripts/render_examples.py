#!/usr/bin/env python3
"""Render the worked action-sequence fixtures to SVG and print their stats."""
import argparse
from pathlib import Path

from drawbench import interpret, parse_actions, render_svg, trace_stats

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="renders")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    print(f"{'fixture':<26}{'segs':>5}  {'coverage':>9}  tools / colors")
    for path in sorted(FIXTURES.glob("*.actions.json")):
        trace = interpret(parse_actions(path.read_text()))
        st = trace_stats(trace)
        name = path.name[: -len(".actions.json")]
        (out / f"{name}.svg").write_text(render_svg(trace))
        tools = ",".join(sorted(t.value for t in st.tools_used))
        print(f"{name:<26}{st.segments:>5}  {st.coverage:>9.6f}  {tools} / {','.join(sorted(st.colors_used))}")
    print(f"\nSVGs written to {out}/")


if __name__ == "__main__":
    main()
