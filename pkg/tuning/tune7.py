import numpy as np, time
import psdsketch as ps
from psdsketch.pcp import column_pcp, row_pcp, verify_pcp

cfg = ps.AlgoConfig()
t0 = time.time()

# C7: column PCP, n=256, k=4, eps=0.25, 100 sketches, battery=100 random + adversarial
m = ps.gen_powerlaw_psd(256, seed=42)
good = 0
worsts = []
for s in range(100):
    o = m.oracle()
    sk = column_pcp(o, 4, 0.25, cfg, seed=s, scheme="plain")
    ver = verify_pcp(sk, m, trials=100, seed=s + 5000)
    good += ver.worst_distortion <= 0.25
    worsts.append(ver.worst_distortion)
print(f"C7: pass {good}/100, worst med {np.median(worsts):.3f} max {np.max(worsts):.3f}, t={sk.sample.t}")

# negative control: t/100
o = m.oracle()
sk_full = column_pcp(o, 4, 0.25, cfg, seed=0, scheme="plain")
t_small = max(1, sk_full.sample.t // 100)
from psdsketch.sampling import scores_to_sampleset
from psdsketch.pcp import PcpSketch
small = scores_to_sampleset(np.ones(256), t_small, 7, "neg", "neg")
skt = o.matrix.values[:, small.indices] * small.weights[None, :]
neg = PcpSketch(kind="column_frob", sketch=skt, sample=small, base_sample=None, eps=0.25, k=4)
vneg = verify_pcp(neg, m, trials=100, seed=99)
print(f"C7 negative control t={t_small}: worst {vneg.worst_distortion:.3f} (need > 0.25)")

# C8: row PCPs both modes at n=512, k=4, eps=0.5
m2 = ps.gen_powerlaw_psd(512, seed=43)
for mode, scheme in (("frobenius", "mixed"), ("spectral", "spectral")):
    good8, dmax, delta_ok_all = 0, 0, True
    for s in range(20):
        o = m2.oracle()
        col = column_pcp(o, 4, 0.5, cfg, seed=s, scheme=scheme)
        row = row_pcp(o, col, 4, 0.5, mode, cfg, seed=s + 333)
        ver = verify_pcp(row, m2, trials=50, seed=s + 777)
        good8 += ver.worst_distortion <= 0.5
        dmax = max(dmax, ver.worst_distortion)
        delta_ok_all &= ver.delta_ok
    print(f"C8 {mode}: pass {good8}/20 (worst max {dmax:.3f}) delta_ok {delta_ok_all} t1={col.sample.t} t2={row.sample.t}")
print("time", time.time() - t0)
