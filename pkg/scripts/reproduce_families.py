#!/usr/bin/env python3
"""Build every example family at its headline parameters and print a
predicted-vs-computed table, with the violation verdicts."""

import numpy as np

from srlab import gallery
from srlab.matrices import gaussian_matrix, prescribed_spectrum_matrix


def show(instance):
    print(f"\n{instance.name}  params={instance.params}")
    if instance.threshold_met is not None:
        print(f"  threshold_met={instance.threshold_met}  thresholds={instance.thresholds}")
    if instance.notes:
        print(f"  note: {instance.notes}")
    for key, entry in gallery.evaluate(instance).items():
        print(
            f"  {key:24s} predicted={entry['predicted']:< 18.12g} "
            f"computed={entry['computed']:< 18.12g} rel_err={entry['rel_err']:.2e}"
        )


def main():
    rng = np.random.default_rng(0)

    show(gallery.geometric_decay(10, 0.5))
    show(gallery.deletion_family(5, 2.0))
    show(gallery.sum_violation_family(5, 4.0))
    show(gallery.rank1_drop_family(5, 3.0))
    show(gallery.product_violation_family(3, 2.0))
    show(gallery.cross_gap_family(3, 0.5))

    a = prescribed_spectrum_matrix(rng, 5, 5, [2.0, 1.7, 1.2, 0.9, 0.5])
    show(gallery.maximizer_multiplier(a))
    show(gallery.minimizer_multiplier(a, 0.1))

    x = gaussian_matrix(rng, 8, 5)
    show(gallery.congruence_maximizer(x.T @ x))
    show(gallery.congruence_minimizer(x.T @ x, 0.25))

    show(gallery.equality_cases("projector", 6, 2.0, rank=3, seed=1))
    show(gallery.equality_cases("scaled_unitary", 5, 3.0, seed=2))
    show(gallery.equality_cases("flat_spectrum", 6, 10.0, rank=2, seed=3))
    show(gallery.equality_cases("rank1", 4, float("inf"), seed=4))


if __name__ == "__main__":
    main()
