"""What different networks do far from their data.

Probes random MLPs along rays z * u for z up to 2^30 and classifies the
asymptotic behaviour: piecewise-linear activations go affine, saturating
ones go constant, snake keeps oscillating forever.

Run:  python demos/02_ray_asymptotics.py
"""

import numpy as np

from snakelab import (Activation, InitScheme, Mlp, MlpConfig,
                      classify_asymptotics, probe_ray, random_direction)


def random_net(kind, seed):
    net = Mlp.build(MlpConfig((4, 16, 16, 2), Activation(kind, a=1.0),
                              init=InitScheme("kaiming"), seed=seed))
    rng = np.random.default_rng(seed + 1)
    for b in net.biases:
        b[:] = rng.uniform(-0.5, 0.5, size=b.shape)
    return net


rng = np.random.default_rng(0)
for kind in ("relu", "leaky_relu", "swish", "tanh"):
    net = random_net(kind, seed=3)
    u = random_direction(4, rng)
    report = probe_ray(net, u)
    label = classify_asymptotics(report).value
    print(f"{kind:11s} -> {label:18s} "
          f"slope |df/dz| = {np.abs(report.slope).max():.3e}, "
          f"affine residual = {report.affine_residual:.1e}, "
          f"constancy deviation = {report.constancy_deviation:.1e}")

# Direction matters: the asymptotic slope is a function of u, not of the
# network alone.
net = random_net("relu", seed=5)
slopes = []
for _ in range(4):
    u = random_direction(4, rng)
    slopes.append(probe_ray(net, u).slope)
print("\nsame relu net, four directions, four asymptotic slopes:")
for s in slopes:
    print("   ", np.round(s, 4))

# A snake net refuses to settle: its residual against the best affine fit
# keeps a fixed amplitude however far out you look.
rng2 = np.random.default_rng(7)
snake_net = Mlp((1, 12, 1), Activation("snake", a=1.0),
                [rng2.uniform(0.5, 1.5, (12, 1)), rng2.uniform(-1, 1, (1, 12))],
                [np.zeros((1, 12)), np.zeros((1, 1))])
report = probe_ray(snake_net, np.array([1.0]))
print(f"\nsnake net -> {classify_asymptotics(report).value}, residual "
      f"amplitude {np.abs(report.scan_residual).max():.3f} "
      f"(persists at every z)")
