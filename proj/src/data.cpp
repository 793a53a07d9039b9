#include "ggan/data.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>

namespace ggan {

MixtureDataset make_mixture(std::size_t K_true, std::size_t dim_data, std::size_t N,
                            double separation, std::uint64_t seed, std::size_t dim_latent) {
  if (separation <= 0) throw GganError(Err::BadParameter, "separation must be > 0");
  if (K_true < 1 || N < 1 || dim_data < 1 || dim_latent < 2)
    throw GganError(Err::BadParameter, "make_mixture: bad sizes");

  MixtureDataset ds;
  ds.K_true = K_true;
  ds.seed = seed;
  ds.means2d = Tensor::zeros({K_true, 2});
  for (std::size_t k = 0; k < K_true; ++k) {
    const double ang = 2.0 * M_PI * double(k) / double(K_true);
    ds.means2d.at(k, 0) = separation * std::cos(ang);
    ds.means2d.at(k, 1) = separation * std::sin(ang);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Fixed affine lift into data space; scaled so tanh stays informative.
  Tensor lift = Tensor::zeros({dim_latent, dim_data});
  const double scale = 1.0 / (separation * std::sqrt(double(dim_latent)));
  for (double& v : lift.data) v = scale * gauss(rng);
  Tensor bias = Tensor::zeros({1, dim_data});
  for (double& v : bias.data) v = 0.1 * gauss(rng);

  ds.samples = Tensor::zeros({N, dim_data});
  ds.labels.resize(N);
  std::uniform_int_distribution<std::size_t> pick(0, K_true - 1);
  std::vector<double> z(dim_latent);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t k = pick(rng);
    ds.labels[i] = int(k);
    z[0] = ds.means2d.at(k, 0) + gauss(rng);
    z[1] = ds.means2d.at(k, 1) + gauss(rng);
    for (std::size_t j = 2; j < dim_latent; ++j) z[j] = gauss(rng);
    for (std::size_t d = 0; d < dim_data; ++d) {
      double s = bias.data[d];
      for (std::size_t j = 0; j < dim_latent; ++j) s += z[j] * lift.at(j, d);
      ds.samples.at(i, d) = std::tanh(s);
    }
  }
  return ds;
}

Tensor render_dot_clip(std::size_t T, std::size_t side, int x0, int y0, int vx, int vy) {
  if (side < 4) throw GganError(Err::BadParameter, "frame side must be >= 4");
  const int lim = int(side) - 3;  // top-left corner range for a 3x3 dot
  if (x0 < 0 || y0 < 0 || x0 > lim || y0 > lim)
    throw GganError(Err::BadParameter, "dot start position out of frame");
  Tensor clip = Tensor::full({T * side * side}, -1.0);
  clip.shape = {1, T * side * side};
  int x = x0, y = y0;
  for (std::size_t t = 0; t < T; ++t) {
    for (int dy = 0; dy < 3; ++dy)
      for (int dx = 0; dx < 3; ++dx)
        clip.data[t * side * side + std::size_t(y + dy) * side + std::size_t(x + dx)] = 1.0;
    // Elastic reflection keeps the dot inside the frame.
    x += vx;
    y += vy;
    if (x < 0) { x = -x; vx = -vx; }
    if (x > lim) { x = 2 * lim - x; vx = -vx; }
    if (y < 0) { y = -y; vy = -vy; }
    if (y > lim) { y = 2 * lim - y; vy = -vy; }
  }
  return clip;
}

VideoDataset make_bouncing_dot(std::size_t T, std::size_t N, std::uint64_t seed, std::size_t side) {
  if (T < 2) throw GganError(Err::BadParameter, "make_bouncing_dot needs T >= 2");
  VideoDataset ds;
  ds.T = T;
  ds.side = side;
  ds.clips = Tensor::zeros({N, T * side * side});
  ds.dynamics.resize(N);

  std::mt19937_64 rng(seed);
  const int lim = int(side) - 3;
  std::uniform_int_distribution<int> pos(0, lim);
  std::uniform_int_distribution<int> vel(-2, 2);
  for (std::size_t i = 0; i < N; ++i) {
    const int x0 = pos(rng), y0 = pos(rng);
    int vx = vel(rng), vy = vel(rng);
    if (vx == 0 && vy == 0) vx = 1;  // keep every clip moving
    ds.dynamics[i] = {x0, y0, vx, vy};
    Tensor clip = render_dot_clip(T, side, x0, y0, vx, vy);
    std::copy(clip.data.begin(), clip.data.end(), ds.clips.data.begin() + i * clip.size());
  }
  return ds;
}

static std::uint32_t read_u32_be(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw GganError(Err::TruncatedFile, "idx header truncated");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

Tensor read_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GganError(Err::IoError, "cannot open '" + path + "'");
  const std::uint32_t magic = read_u32_be(in);
  if (magic == 0x00000803) {
    const std::size_t n = read_u32_be(in), r = read_u32_be(in), c = read_u32_be(in);
    std::vector<unsigned char> raw(n * r * c);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size())
      throw GganError(Err::TruncatedFile, "idx image payload truncated");
    Tensor t = Tensor::zeros({n, r, c});
    for (std::size_t i = 0; i < raw.size(); ++i) t.data[i] = double(raw[i]) / 127.5 - 1.0;
    return t;
  }
  if (magic == 0x00000801) {
    const std::size_t n = read_u32_be(in);
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (std::size_t(in.gcount()) != raw.size())
      throw GganError(Err::TruncatedFile, "idx label payload truncated");
    Tensor t = Tensor::zeros({n});
    for (std::size_t i = 0; i < n; ++i) t.data[i] = double(raw[i]);
    return t;
  }
  throw GganError(Err::BadMagic, "unsupported idx magic in '" + path + "'");
}

void write_pgm_grid(const std::vector<Tensor>& frames, std::size_t rows, std::size_t cols,
                    const std::string& path) {
  if (frames.empty()) throw GganError(Err::EmptyInput, "no frames to write");
  if (rows * cols < frames.size())
    throw GganError(Err::BadParameter, "grid smaller than frame count");
  const std::size_t fh = frames[0].shape.size() >= 2 ? frames[0].shape[frames[0].shape.size() - 2]
                                                     : frames[0].size();
  const std::size_t fw = frames[0].shape.back();
  for (auto& f : frames)
    if (f.size() != fh * fw) throw GganError(Err::ShapeMismatch, "frames differ in size");

  const std::size_t W = cols * fw + (cols - 1);
  const std::size_t H = rows * fh + (rows - 1);
  std::vector<unsigned char> img(W * H, 0);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::size_t gr = i / cols, gc = i % cols;
    const std::size_t oy = gr * (fh + 1), ox = gc * (fw + 1);
    for (std::size_t y = 0; y < fh; ++y)
      for (std::size_t x = 0; x < fw; ++x) {
        double v = frames[i].data[y * fw + x];
        v = std::min(1.0, std::max(-1.0, v));
        img[(oy + y) * W + ox + x] = (unsigned char)std::lround((v + 1.0) * 127.5);
      }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GganError(Err::IoError, "cannot write '" + path + "'");
  out << "P5\n" << W << " " << H << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()), std::streamsize(img.size()));
  if (!out) throw GganError(Err::IoError, "short write to '" + path + "'");
}

}  // namespace ggan
