"""Heuristic link prediction with ranking metrics on a held-out edge split.

Edges are split 70/10/20 with one sampled non-edge per positive; scorers see
only the training graph. Adamic-Adar and common-neighbor counting are local
heuristics; the detour scorer ranks pairs by (negated) landmark detour
distance, a global positional signal.
"""

from detour import (
    GenSpec,
    distance_vectors,
    hierarchical_partition,
    metric_auc,
    metric_hits_at_k,
    metric_mrr,
    score_pairs,
    select_landmarks,
    split_edges,
)

g = GenSpec("ba", 600, m=4).generate(seed=3)
print(f"graph: {g.num_nodes} nodes, {g.num_edges} edges")

split = split_edges(g, (70, 10, 20), seed=1)
print(f"split: {len(split.train_pos)} train / {len(split.valid_pos)} valid / {len(split.test_pos)} test positives, 1:1 negatives\n")

train_g = split.train_graph
part = hierarchical_partition(train_g, eta=2, seed=0)
profile = distance_vectors(train_g, select_landmarks(train_g, part, "degree"))

print(f"{'scorer':>8} {'AUC':>8} {'hits@20':>9} {'MRR':>8}")
for name in ("aa", "cn", "detour"):
    model = profile if name == "detour" else train_g
    sp = score_pairs(name, model, split.test_pos, split.test_neg)
    print(
        f"{name:>8} {metric_auc(sp):>8.4f} {metric_hits_at_k(sp, 20):>9.4f} {metric_mrr(sp):>8.4f}"
    )

print("\nAUC = P(positive outscores negative), ties half; hits@20 counts positives")
print("strictly above the 20th-best negative; MRR is the mean reciprocal")
print("pessimistic rank of each positive among the sampled negatives.")
