"""
Dropping devices on a field and picking a cluster
=================================================

Devices land on a square as a Poisson point process and wander with a
random-direction walk. Dynamic clustering keeps the ones that spent most
of their recent history inside the cluster circle, then links every pair
that stayed far enough apart.
"""

import numpy as np

from geogroup.clustering import ClusterSpec, dynamic_clustering
from geogroup.graph import complement, density
from geogroup.mobility import generate_deployment, preset_scenario

sc = preset_scenario("moderate")
print(sc)
print("expected devices on the field:", round(sc.expected_nodes))

dep = generate_deployment(sc, seed=3)
pos = dep.positions()  # (nodes, samples, 2)
print("deployed:", dep.n, "history shape:", pos.shape)

# how far does a device drift over its 10-sample history?
drift = np.linalg.norm(pos[:, -1] - pos[:, 0], axis=1)
print("median drift over the window: %.1f m" % np.median(drift))

spec = ClusterSpec.for_deployment(dep)
res = dynamic_clustering(dep, spec)
print("suitable nodes:", len(res.suitable_ids), "of", dep.n)
print("rejected (first five):", dict(list(res.rejected.items())[:5]))

g = res.graph
print("suitability graph: %d nodes, %d edges, density %.3f" % (g.n, len(g.edges), density(g)))
gp = complement(g)
print("complement (the graph we color): density %.3f" % density(gp))
