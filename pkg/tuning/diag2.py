import numpy as np
import psdsketch as ps
from psdsketch.exact import frob_sq, spec_norm_sq, best_rank_k
from psdsketch.lowrank import rank_k_truncate
from psdsketch.core import HardInstanceSpec, gen_hard_instance, hard_instance_best_rank_k_tail

cfg = ps.AlgoConfig()
n, k, eps = 1024, 4, 0.5
for seed in range(6):
    spec = HardInstanceSpec(n, k, eps, "gamma_b", seed)
    m, blocks = gen_hard_instance(spec)
    A = m.values
    opt = hard_instance_best_rank_k_tail(spec, blocks)
    planted = [b.planted for b in blocks if b.planted is not None]
    o = m.oracle()
    f, rep = ps.algorithm1_frobenius(o, k, eps, cfg, seed=seed+100, keep_internals=True)
    I = rep.internals
    s1, z, q = I['s1'], I['z'], I['q']
    # blocks caught by S1?
    caught = [len(np.intersect1d(s1.indices, p)) for p in planted]
    AS1 = A[:, s1.indices] * s1.weights[None, :]
    pcp = frob_sq(AS1 - rank_k_truncate(AS1, k)) / opt
    zspan = frob_sq(AS1 - rank_k_truncate((AS1 @ z) @ z.T, k)) / opt
    qAS1 = frob_sq(AS1 - q @ (q.T @ AS1)) / opt
    qA = frob_sq(A - q @ (q.T @ A)) / opt
    err = frob_sq(A - f.apply()) / opt
    print(f"seed {seed}: b={len(planted)} caught={caught} pcp {pcp:.3f} zspan {zspan:.3f} qAS1 {qAS1:.3f} qA {qA:.3f} final {err:.3f} acc {rep.accesses}")
