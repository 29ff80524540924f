"""Commute times against effective resistance, and escape probabilities."""
from walkbound import solver
from walkbound.fixtures import all_fixtures
from walkbound.generate import CampaignConfig, generate_instance


def main():
    for fx in all_fixtures():
        g = fx.graph
        total = solver.network_total_conductance(g, None)
        u, v = 0, g.n - 1
        c = solver.commute_time(g, None, u, v)
        r = solver.effective_resistance(g, None, u, v)
        print(f"{fx.name:<13} C({g.label(u)},{g.label(v)}) = {str(c):>7}   2m * R = {total} * {r} = {total * r}")

    inst = generate_instance(CampaignConfig(weighting="random", seed=8), 1)
    g, w = inst.graph, inst.weights
    total = solver.network_total_conductance(g, w)
    c = solver.commute_time(g, w, 0, 1, "float")
    r = solver.effective_resistance(g, w, 0, 1, "float")
    print(f"weighted random graph: C = {c:.12f}, F * R = {float(total) * r:.12f}")

    # probability of reaching the target before a second absorbing vertex
    p = solver.hit_before_probability(g, w, target=0, avoid=1)
    print("P(hit 0 before 1):", [f"{float(x):.4f}" for x in p])
    print("stationary law:", [f"{float(x):.4f}" for x in solver.stationary_distribution(g, w)])


if __name__ == "__main__":
    main()
