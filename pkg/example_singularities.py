#!/usr/bin/env python3
"""
Example script: singularities of closed maps through the origin
Run this script with a few numbers to watch the harmonic mean reappear
"""

import sys
from pathlib import Path

# Add src directory to path to import our modules
sys.path.append('src')

from field import harmonic_mean, parse_value
from pnet import check_pnet_singularity
from dhol import check_dhol_singularity
from pentagram import check_pentagram_dodgson, corr_iterate, make_axis_polygon
from render import polygon_scene


def main():
    """
    P-nets and discrete holomorphic maps on the same closed row, then a pentagram collapse
    """
    print("=== Singularity Example ===\n")

    texts = sys.argv[1:] or ['1', '3', '-2+1/2*i', '5']
    values = [parse_value(t) for t in texts]
    m = len(values)
    print(f"📁 Closed row of length m={m}: {', '.join(v.format() for v in values)}")
    print(f"📏 Harmonic mean: {harmonic_mean(values).format()}\n")

    for label, report in (("P-net", check_pnet_singularity(values)),
                          ("discrete holomorphic", check_dhol_singularity(values))):
        status = "✅" if report.passed else "❌"
        value = report.value.format() if report.value is not None else '-'
        print(f"{status} {label}: constant row after {report.observed_step} step(s), value {value}")

    print("\n" + "=" * 50)
    polygon = make_axis_polygon(3, seed=5)
    report = check_pentagram_dodgson(polygon)
    print(f"{'✅' if report.passed else '❌'} axis-aligned hexagon collapses to its centroid "
          f"after {report.observed_step} pentagram steps")
    output = Path("output") / "example_pentagram_dodgson.svg"
    polygon_scene(corr_iterate(polygon, 2), title="pentagram Dodgson m=3").save(output)
    print(f"📐 Orbit drawn to {output}")


if __name__ == "__main__":
    main()
