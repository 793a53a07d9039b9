#include "ggan/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "ggan/errors.hpp"
#include "json.hpp"

namespace ggan {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "ggan-ckpt-1";

void write_doubles(std::ofstream& os, const std::vector<double>& v) {
  for (double d : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 8);
  }
}

void read_doubles(std::ifstream& is, std::vector<double>& v) {
  for (double& d : v) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw GganError(Err::CorruptManifest, "checkpoint sidecar ended early");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    std::memcpy(&d, &bits, sizeof(d));
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const TrainerState& state,
                     const std::map<std::string, std::string>& meta) {
  json manifest;
  manifest["format"] = kFormat;
  manifest["step"] = state.step;
  std::ostringstream rng;
  rng << state.rng;
  manifest["rng"] = rng.str();
  json steps = json::object();
  for (Owner o : {Owner::generative, Owner::recognition, Owner::discriminators, Owner::prior})
    steps[owner_name(o)] = state.store.adam_steps(o);
  manifest["adam_steps"] = steps;
  manifest["meta"] = meta;

  json params = json::array();
  std::ofstream bin(path + ".bin", std::ios::binary);
  if (!bin) throw GganError(Err::IoError, "cannot write " + path + ".bin");
  for (const auto& [name, p] : state.store.items()) {
    json entry;
    entry["name"] = name;
    entry["owner"] = owner_name(p.owner);
    entry["shape"] = p.value.shape;
    params.push_back(entry);
    write_doubles(bin, p.value.data);
    write_doubles(bin, p.m.data);
    write_doubles(bin, p.v.data);
  }
  bin.close();
  if (!bin) throw GganError(Err::IoError, "write failed for " + path + ".bin");
  manifest["params"] = params;

  std::ofstream mf(path);
  if (!mf) throw GganError(Err::IoError, "cannot write " + path);
  mf << manifest.dump(2) << "\n";
  mf.close();
  if (!mf) throw GganError(Err::IoError, "write failed for " + path);
}

std::map<std::string, std::string> load_checkpoint(const std::string& path, TrainerState& state) {
  std::ifstream mf(path);
  if (!mf) throw GganError(Err::IoError, "cannot open " + path);
  json manifest;
  try {
    mf >> manifest;
  } catch (const json::exception& e) {
    throw GganError(Err::CorruptManifest, std::string("bad checkpoint manifest: ") + e.what());
  }
  if (!manifest.contains("format") || !manifest["format"].is_string())
    throw GganError(Err::CorruptManifest, "manifest missing format field");
  if (manifest["format"].get<std::string>() != kFormat)
    throw GganError(Err::VersionMismatch,
                    "unsupported checkpoint format " + manifest["format"].get<std::string>());
  if (!manifest.contains("params") || !manifest["params"].is_array() ||
      !manifest.contains("rng") || !manifest.contains("step") || !manifest.contains("adam_steps"))
    throw GganError(Err::CorruptManifest, "manifest missing required fields");

  std::ifstream bin(path + ".bin", std::ios::binary);
  if (!bin) throw GganError(Err::IoError, "cannot open " + path + ".bin");

  for (const auto& entry : manifest["params"]) {
    std::string name = entry.at("name").get<std::string>();
    std::vector<std::size_t> shape = entry.at("shape").get<std::vector<std::size_t>>();
    Owner owner = owner_from_name(entry.at("owner").get<std::string>());
    if (!state.store.has(name)) state.store.add(name, Tensor::zeros(shape), owner);
    Param& p = state.store.get(name);
    if (p.value.shape != shape)
      throw GganError(Err::ShapeMismatch, "checkpoint shape differs for parameter " + name);
    read_doubles(bin, p.value.data);
    read_doubles(bin, p.m.data);
    read_doubles(bin, p.v.data);
  }

  state.step = manifest["step"].get<long>();
  for (auto& [key, val] : manifest["adam_steps"].items())
    state.store.set_adam_steps(owner_from_name(key), val.get<long>());
  std::istringstream rng(manifest["rng"].get<std::string>());
  rng >> state.rng;
  if (!rng) throw GganError(Err::CorruptManifest, "bad rng state in manifest");

  std::map<std::string, std::string> meta;
  if (manifest.contains("meta"))
    meta = manifest["meta"].get<std::map<std::string, std::string>>();
  return meta;
}

}  // namespace ggan
