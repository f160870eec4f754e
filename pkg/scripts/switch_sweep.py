"""Sweep candidate switch points on the second-order pair.

For each candidate n the switch advisor reports the four decision RMS
values; the table also shows where a hybrid run that switches at n ends up
after a fixed hardware budget, which is the quantity the advisor is trying
to optimize indirectly. Larger n means more free model iterations but also
more time spent converging toward the wrong (model) fixed point.
"""

import argparse
import math

from liftedilc import (
    LearningLaw,
    evaluate_switch,
    run_hybrid,
)
from liftedilc.selfcheck import _example_pair


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--law", default="p_transpose")
    parser.add_argument("--budget", type=int, default=10,
                        help="hardware iterations after the switch")
    parser.add_argument("--candidates", default="5,10,25,50,100,200")
    args = parser.parse_args()

    world, model, u0, desired = _example_pair("second_order")
    law = LearningLaw(args.law, 1.0)
    print(f"law {args.law}, hardware budget {args.budget}")
    print("     n   R_M,n      jump       model slope  world slope  "
          "final dB  advice")
    for text in args.candidates.split(","):
        n = int(text)
        report = evaluate_switch(world, model, law, u0, None, n, 1.0, desired)
        hybrid = run_hybrid(world, model, law, u0, None, n, args.budget, desired)
        final_db = 20.0 * math.log10(hybrid.records[-1].rms)
        advice = "switch" if report.recommend_switch else "stay"
        print(
            f"  {n:4d}   {report.r_model_n:.4f}     {report.jump:+.4f}    "
            f"{report.model_slope:11.6f}  {report.world_slope:11.6f}  "
            f"{final_db:8.2f}  {advice}"
        )


if __name__ == "__main__":
    main()
