"""Randomized s-t connectivity: walk for 2N steps, repeat until the error is below epsilon."""
from walkbound.fixtures import bowtie
from walkbound.graph import Graph
from walkbound.simulate import st_connectivity


def main():
    g = bowtie().graph
    v = st_connectivity(g, None, 1, 5, epsilon=0.01, seed=1)
    print(f"bowtie 1 -> 5: {v.verdict}, {v.repetitions} walk(s) of length {v.walk_length}, {v.steps} steps")

    split = Graph(6, ((0, 1), (1, 2), (3, 4), (4, 5)))
    for eps in (0.5, 0.05, 0.001):
        v = st_connectivity(split, None, 0, 5, epsilon=eps, seed=1)
        print(f"two components, epsilon={eps}: {v.verdict} after {v.repetitions} walks")

    # a walk bound that is far too short leads to false negatives, never false positives
    misses = sum(not st_connectivity(g, None, 1, 5, 0.01, N=1, seed=s).connected for s in range(200))
    print(f"walk bound N=1 on the bowtie: {misses}/200 runs miss the target")


if __name__ == "__main__":
    main()
