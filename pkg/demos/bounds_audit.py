"""Every applicable upper bound next to the exact value, with the slack."""
from fractions import Fraction

from walkbound.bounds import audit, poly_F, poly_P
from walkbound.fixtures import diamond_tail, path
from walkbound.graph import CostFunction, EdgeWeights
from walkbound.generate import CampaignConfig, generate_instance


def fmt(x):
    if isinstance(x, Fraction) and x.denominator > 1000:
        return f"{float(x):.6g}"
    return str(x)


def print_report(title, rep, limit=12):
    print(f"{title}: max H = {fmt(rep.max_hitting)}, sharp = {rep.sharp}, passed = {rep.passed}")
    for r in rep.records[:limit]:
        print(f"  H({r.source},{r.target}) {r.kind:<17} exact {fmt(r.exact):>8}  bound {fmt(r.bound):>8}"
              f"  slack {fmt(r.slack)}")
    if len(rep.records) > limit:
        print(f"  ... {len(rep.records) - limit} more")


def main():
    print("P(t, m) and F(t, m) for t = 1 and t = 2")
    for m in range(1, 7):
        print(f"  m={m}  P(1)={poly_P(1, m):>3}  F(1)={poly_F(1, m):>3}  P(2)={poly_P(2, m):>4}  F(2)={poly_F(2, m):>5}")

    # the path is the one graph where m^2 is reached
    print_report("unit path, 6 edges", audit(path(6), target=0), limit=6)

    g = diamond_tail().graph
    print_report("triangle with a tail", audit(g, target=0), limit=8)

    # a weighted random instance with random costs
    inst = generate_instance(CampaignConfig(weighting="random", seed=3), 1)
    rep = audit(inst.graph, inst.weights, inst.costs, target=inst.target)
    print_report(f"random instance n={inst.graph.n} m={inst.graph.m}", rep, limit=8)

    # edge weights between 1 and 3/2: the weighted bound is far below the coarse one
    w = EdgeWeights(g, [1, Fraction(3, 2), 1, Fraction(3, 2)])
    rep = audit(g, w, CostFunction.constant(g, 1), target=0)
    print_report("tail graph, weights up to 3/2", rep, limit=8)


if __name__ == "__main__":
    main()
