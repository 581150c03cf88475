#include "tiered/problems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tiered {

namespace {

void require_same_size(const GrayImage& a, const GrayImage& b, const char* what) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw ModelError(std::string(what) + ": image sizes differ (" + std::to_string(a.rows) + "x" +
                     std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" + std::to_string(b.cols) + ")");
  }
}

}  // namespace

EnergyModel build_stereo(const GrayImage& left, const GrayImage& right, int disparities,
                         const PairwisePotential& pairwise, double data_truncation) {
  require_same_size(left, right, "stereo");
  if (disparities < 2) throw ModelError("stereo needs at least two disparities");
  const GridDims d(left.rows, left.cols);
  std::vector<double> unary(static_cast<std::size_t>(d.size()) * disparities);
  for (int r = 0; r < d.rows; ++r) {
    for (int k = 0; k < d.cols; ++k) {
      for (int disp = 0; disp < disparities; ++disp) {
        const int kr = std::max(k - disp, 0);
        const double diff = std::abs(static_cast<double>(left.at(r, k)) - right.at(r, kr));
        unary[static_cast<std::size_t>(d.pixel(r, k)) * disparities + disp] = std::min(diff, data_truncation);
      }
    }
  }
  return EnergyModel(d, disparities, std::move(unary), pairwise);
}

double denoise_level(Label l, int num_labels) {
  return num_labels == 1 ? 0.0 : l * (255.0 / (num_labels - 1));
}

EnergyModel build_denoise(const GrayImage& noisy, double lambda, int num_labels) {
  if (num_labels < 2 || num_labels > 256) throw ModelError("denoising needs 2..256 labels");
  const GridDims d(noisy.rows, noisy.cols);
  std::vector<double> unary(static_cast<std::size_t>(d.size()) * num_labels);
  for (int p = 0; p < d.size(); ++p) {
    for (Label l = 0; l < num_labels; ++l) {
      const double diff = noisy.pixels[p] - denoise_level(l, num_labels);
      unary[static_cast<std::size_t>(p) * num_labels + l] = diff * diff;
    }
  }
  const double step = denoise_level(1, num_labels);
  return EnergyModel(d, num_labels, std::move(unary), PairwisePotential::quadratic(lambda * step * step));
}

EnergyModel build_segment(const GrayImage& image, const CostMap& fg, const CostMap& bg, double potts_v,
                          double beta) {
  if (fg.rows != image.rows || fg.cols != image.cols || bg.rows != image.rows || bg.cols != image.cols) {
    throw ModelError("segment: unary maps must match the image size");
  }
  const GridDims d(image.rows, image.cols);
  std::vector<double> unary(static_cast<std::size_t>(d.size()) * 2);
  for (int p = 0; p < d.size(); ++p) {
    unary[static_cast<std::size_t>(p) * 2 + 0] = bg.values[p];
    unary[static_cast<std::size_t>(p) * 2 + 1] = fg.values[p];
  }
  std::vector<double> scales(static_cast<std::size_t>(d.num_edges()));
  for (int e = 0; e < d.num_edges(); ++e) {
    const Edge pq = d.edge(e);
    const double diff = static_cast<double>(image.pixels[pq.p]) - image.pixels[pq.q];
    scales[e] = std::exp(-beta * diff * diff);
  }
  return EnergyModel(d, 2, std::move(unary), PairwisePotential::potts(potts_v).with_scales(std::move(scales)));
}

EnergyModel build_stitch(std::span<const GrayImage> images, std::span<const GrayImage> masks) {
  if (images.empty()) throw ModelError("stitch: no source images");
  if (images.size() != masks.size()) throw ModelError("stitch: need one mask per source image");
  for (std::size_t i = 1; i < images.size(); ++i) require_same_size(images[0], images[i], "stitch");
  for (const GrayImage& m : masks) require_same_size(images[0], m, "stitch mask");

  const int K = static_cast<int>(images.size());
  const GridDims d(images[0].rows, images[0].cols);
  std::vector<double> unary(static_cast<std::size_t>(d.size()) * K);
  for (int p = 0; p < d.size(); ++p) {
    bool any = false;
    for (int l = 0; l < K; ++l) {
      const bool valid = masks[l].pixels[p] != 0;
      any = any || valid;
      unary[static_cast<std::size_t>(p) * K + l] = valid ? 0.0 : kInfinity;
    }
    if (!any) {
      throw ModelError("stitch: pixel (" + std::to_string(d.row_of(p)) + "," + std::to_string(d.col_of(p)) +
                       ") is covered by no source");
    }
  }

  const std::size_t KK = static_cast<std::size_t>(K) * K;
  std::vector<double> tables(static_cast<std::size_t>(d.num_edges()) * KK);
  for (int e = 0; e < d.num_edges(); ++e) {
    const Edge pq = d.edge(e);
    for (int a = 0; a < K; ++a) {
      for (int b = 0; b < K; ++b) {
        const double at_p = std::abs(static_cast<double>(images[a].pixels[pq.p]) - images[b].pixels[pq.p]);
        const double at_q = std::abs(static_cast<double>(images[a].pixels[pq.q]) - images[b].pixels[pq.q]);
        tables[e * KK + static_cast<std::size_t>(a) * K + b] = at_p + at_q;
      }
    }
  }
  return EnergyModel(d, K, std::move(unary), PairwisePotential::edge_tables(std::move(tables)));
}

}  // namespace tiered
