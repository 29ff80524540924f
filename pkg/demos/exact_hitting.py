"""Exact hitting times, visit counts and cost hitting times on small graphs."""
from walkbound import solver
from walkbound.fixtures import diamond_tail, house, path
from walkbound.graph import CostFunction, EdgeWeights, WalkSpec


def show(title, g, values):
    print(title)
    for v in range(g.n):
        print(f"  {g.label(v):>3}  {values[v]}")


def main():
    # a triangle with a pendant edge: the walk from the far corners needs 9 steps
    fx = diamond_tail()
    spec = WalkSpec(fx.graph, fx.target)
    show("hitting times to a, triangle with a tail", fx.graph, solver.hitting_times(spec))

    # non-integer values appear as soon as the graph has an odd cycle through a
    fx = house()
    show("hitting times to a, five vertices, seven edges", fx.graph,
         solver.hitting_times(WalkSpec(fx.graph, fx.target)))

    # on a path the far end is exactly m^2 steps away
    g = path(8)
    h = solver.hitting_times(WalkSpec(g, 0))
    print(f"path with 8 edges: H(8 -> 0) = {h[8]}")

    # heavier edges further out push the walk away from the target
    w = EdgeWeights(g, [2 ** k for k in range(g.m)])
    hw = solver.hitting_times(WalkSpec(g, 0, w))
    print(f"same path, weights doubling outward: H(8 -> 0) = {hw[8]}")

    # expected visits to a vertex and traversals of an edge, started at the far end
    spec = WalkSpec(g, 0)
    print("visits to vertex 4 from 8:", solver.vertex_visit_counts(spec, 4)[8])
    print("traversals of edge 3-4 from 8:", solver.edge_visit_counts(spec, (3, 4))[8])

    # cost hitting time: pay 1 per step except on the last edge
    f = CostFunction(g, [0] + [1] * (g.m - 1))
    print("cost hitting time with a free final edge:", solver.cost_hitting_times(spec, f)[8])


if __name__ == "__main__":
    main()
