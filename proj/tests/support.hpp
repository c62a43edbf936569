#pragma once

// Shared fixtures: generated snapshots cached per build tree.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ocelforge/catalog.hpp"
#include "ocelforge/extractor.hpp"
#include "ocelforge/pipeline.hpp"
#include "ocelforge/plan.hpp"
#include "ocelforge/synth.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path tmp_root() {
  fs::path root = OCELFORGE_TEST_TMP;
  fs::create_directories(root);
  return root;
}

// Fresh, empty directory under the test scratch area.
inline fs::path fresh_dir(const std::string& name) {
  fs::path dir = tmp_root() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Generates `spec` into tmp/<name> once per process.
inline fs::path snapshot(const std::string& name, const ocelforge::synth::GenSpec& spec) {
  static std::map<std::string, fs::path> cache;
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  fs::path dir = fresh_dir(name);
  ocelforge::synth::generate(spec, dir);
  cache[name] = dir;
  return dir;
}

// Default seed-42 purchase-to-pay snapshot (100 orders, 1..3 items).
inline fs::path seeded_snapshot() { return snapshot("seeded", ocelforge::synth::GenSpec{}); }

// Same, with change documents and a document-flow fixture.
inline ocelforge::synth::GenSpec change_spec() {
  ocelforge::synth::GenSpec spec;
  spec.change_rate = 0.3;
  spec.flow_documents = 20;
  return spec;
}

inline fs::path change_snapshot() { return snapshot("seeded_changes", change_spec()); }

inline ocelforge::ExtractionResult extract_default(const fs::path& dir, const std::string& master = "EKKO",
                                                   const std::set<std::string>& add = {},
                                                   unsigned jobs = 1) {
  const auto catalog = ocelforge::load_catalog(dir);
  const auto plan = ocelforge::default_plan(catalog, master, {}, {}, add);
  return ocelforge::run_extraction(catalog, plan, ocelforge::load_lookups(dir), {}, jobs);
}

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace testsupport
