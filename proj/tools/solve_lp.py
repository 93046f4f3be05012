#!/usr/bin/env python3
"""Solve an exported LP model with HiGHS and print 'name value' lines.

Exit status 3 means no solver is available; the caller treats that as a skip.
"""
import sys


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: solve_lp.py model.lp", file=sys.stderr)
        return 2
    try:
        import highspy
    except ImportError:
        print("highspy is not installed", file=sys.stderr)
        return 3

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 1e-9)
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print("cannot read model", file=sys.stderr)
        return 1
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        print("solver status: %s" % h.modelStatusToString(h.getModelStatus()), file=sys.stderr)
        return 1
    lp = h.getLp()
    values = h.getSolution().col_value
    print("# objective %.12g" % h.getInfo().objective_function_value)
    for name, value in zip(lp.col_names_, values):
        # Round away solver noise; the importer rejects anything else.
        if abs(value - round(value)) <= 1e-6:
            value = round(value)
        if value != 0:
            print(name, repr(float(value)) if value != int(value) else int(value))
    return 0


if __name__ == "__main__":
    sys.exit(main())
