#!/usr/bin/env python3
"""Generate obstruction-verify scenes over the constant triangle cover.

The cochains are produced as an honest total coboundary, so the emitted scene
passes `logfol obstruction verify` by construction; --perturb bumps a single
entry afterwards to get a failing scene with the same shape.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from logfol import leafcomplex

# injective first column map, so every perturbation of theta stays visible
M0 = [[1, 0], [0, 1], [1, 1]]
M1 = [[1, 1, -1]]


def fraction_strings(rows):
    return [[str(Fraction(x)) for x in row] for row in rows]


def build_scene(seed, perturb):
    rng = random.Random(seed)
    data = leafcomplex.constant_cover([M0, M1], n_opens=3)

    def rand_vec(d):
        return [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(d)]

    rho = [rand_vec(data.row_dim(p, 0)) for p in data.pairs]
    hbar = [rand_vec(data.row_dim((i,), 1)) for i in range(3)]
    theta, gbar, bbar = leafcomplex.coboundary_triple(data, rho, hbar)
    gbar = [list(v) for v in gbar]
    if perturb:
        gbar[0][0] += 1

    scene = {
        "note": "coboundary triple over the triangle cover (seed %d%s)"
        % (seed, ", perturbed" if perturb else ""),
        "leaf_data": {"builder": "constant", "ce": [M0, M1], "opens": 3},
        "cochains": {
            "theta": fraction_strings(theta),
            "gbar": fraction_strings(gbar),
            "bbar": fraction_strings(bbar),
        },
    }
    if not perturb:
        scene["correction"] = {
            "rho": fraction_strings(rho),
            "hbar": fraction_strings(hbar),
        }
    return scene


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--perturb", action="store_true",
                        help="break one entry so the verification fails")
    parser.add_argument("-o", "--output", default="-",
                        help='output path ("-" for stdout)')
    args = parser.parse_args(argv)

    scene = build_scene(args.seed, args.perturb)
    text = json.dumps(scene, indent=2)
    if args.output == "-":
        print(text)
    else:
        with open(args.output, "w") as handle:
            handle.write(text + "\n")
        print("wrote %s" % args.output, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
