import numpy as np, time
import psdsketch as ps
from psdsketch.exact import frob_sq, best_rank_k
from psdsketch.core import HardInstanceSpec, gen_hard_instance, hard_instance_best_rank_k_tail
from psdsketch.bench import uniform_query_strawman, strawman_ratio

cfg = ps.AlgoConfig()
t0 = time.time()

# C1: powerlaw 1024 k=10
m = ps.gen_powerlaw_psd(1024, seed=5)
_, tail_f, _ = best_rank_k(m, 10)
r = []
for s in range(20):
    o = m.oracle()
    f, rep = ps.algorithm1_frobenius(o, 10, 0.5, cfg, seed=s)
    r.append(frob_sq(m.values - f.apply()) / tail_f)
r = np.array(r)
print(f"C1 powerlaw(1024,10,.5): med {np.median(r):.3f} max {r.max():.3f} pass {(r<=1.5).sum()}/20 acc {rep.accesses}")

# C12: hard instances, matched strawman
succ_a, succ_s, accs = [], [], []
for rep_i in range(25):
    spec = HardInstanceSpec(1024, 4, 0.5, "gamma_b", 1000 + rep_i)
    m2, blocks = gen_hard_instance(spec)
    opt = hard_instance_best_rank_k_tail(spec, blocks)
    o = m2.oracle()
    f, rp = ps.algorithm1_frobenius(o, 4, 0.5, cfg, seed=2000 + rep_i)
    ratio = frob_sq(m2.values - f.apply()) / opt
    succ_a.append(ratio <= 1.5)
    accs.append(rp.accesses)
    o2 = m2.oracle()
    found, used = uniform_query_strawman(o2, spec, rp.accesses, 3000 + rep_i)
    sr = strawman_ratio(m2, spec, blocks, found)
    succ_s.append(sr <= 1.5)
print(f"C12: alg1 {np.sum(succ_a)}/25 strawman {np.sum(succ_s)}/25 acc mean {np.mean(accs):.0f} max {np.max(accs)} (cap {1024*1024//10})")
print("time", time.time() - t0)
