#pragma once

#include <span>

#include "tiered/grid_energy.hpp"
#include "tiered/image_io.hpp"

namespace tiered {

// Disparity labels d = 0..K-1. D_p(d) = min(|left(r,k) - right(r, max(k-d, 0))|, data_truncation).
EnergyModel build_stereo(const GrayImage& left, const GrayImage& right, int disparities,
                         const PairwisePotential& pairwise, double data_truncation = 20.0);

// Intensity represented by a denoising label: l * 255 / (K - 1).
double denoise_level(Label l, int num_labels);

// D_p(l) = (I_p - level(l))^2 and V = lambda * (level(a) - level(b))^2.
EnergyModel build_denoise(const GrayImage& noisy, double lambda, int num_labels = 256);

// Binary segmentation, label 1 = foreground. D_p(1) = fg(p), D_p(0) = bg(p);
// Potts(v) on every edge scaled by exp(-beta * (I_p - I_q)^2).
EnergyModel build_segment(const GrayImage& image, const CostMap& fg, const CostMap& bg, double potts_v,
                          double beta);

// Label l selects source image l. D_p(l) = 0 where mask l is non-zero, +inf
// elsewhere. V_pq(a, b) = |I_a(p) - I_b(p)| + |I_a(q) - I_b(q)|.
EnergyModel build_stitch(std::span<const GrayImage> images, std::span<const GrayImage> masks);

}  // namespace tiered
