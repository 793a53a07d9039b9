#pragma once

#include <array>
#include <string>
#include <vector>

#include "ggan/tensor.hpp"

namespace ggan {

// Synthetic stand-in for class-structured image data: a separable 2-D
// Gaussian mixture pushed through a fixed seeded affine map and tanh into
// data space, so samples live in [-1, 1]^dim_data.
struct MixtureDataset {
  Tensor samples;  // [N, dim_data]
  std::vector<int> labels;
  std::size_t K_true = 0;
  std::uint64_t seed = 0;
  Tensor means2d;  // [K_true, 2] generating component means
};

MixtureDataset make_mixture(std::size_t K_true, std::size_t dim_data, std::size_t N,
                            double separation, std::uint64_t seed, std::size_t dim_latent = 2);

// Synthetic video: one bright 3x3 dot bouncing elastically inside a
// side x side frame, integer position and velocity fixed per clip.
struct VideoDataset {
  Tensor clips;  // [N, T*side*side], frames concatenated
  std::size_t T = 0;
  std::size_t side = 0;
  std::vector<std::array<int, 4>> dynamics;  // (x0, y0, vx, vy) per clip
};

VideoDataset make_bouncing_dot(std::size_t T, std::size_t N, std::uint64_t seed,
                               std::size_t side = 16);

// Deterministic single-clip renderer used by the generator (and by tests for
// hand-picked dynamics).
Tensor render_dot_clip(std::size_t T, std::size_t side, int x0, int y0, int vx, int vy);

// Big-endian IDX reader (magic 0x803: u8 rank-3 images scaled to [-1,1];
// magic 0x801: u8 labels).
Tensor read_idx(const std::string& path);

// Binary PGM (P5, maxval 255) grid of [-1,1] frames with 1-pixel black
// separators; bit-exact for fixed input.
void write_pgm_grid(const std::vector<Tensor>& frames, std::size_t rows, std::size_t cols,
                    const std::string& path);

}  // namespace ggan
