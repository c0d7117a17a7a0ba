#include "asgcn/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "asgcn/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace asgcn {

namespace {

[[noreturn]] void bad_line(const std::string& file, std::size_t line, const std::string& what) {
  throw parse_error(file + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw parse_error("cannot open " + p.string());
  return in;
}

}  // namespace

void raw_dataset::validate() const {
  if (labels.size() != n) throw validation_error("label count does not match node count");
  if (features.rows() != n) throw validation_error("feature row count does not match node count");
  if (num_classes == 0) throw validation_error("dataset has no classes");
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes)
      throw validation_error("label out of range at node " + std::to_string(i));
  }
  if (!features.all_finite()) throw validation_error("non-finite feature value");
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw validation_error("edge endpoint out of range");
    if (u == v) throw validation_error("self-loop stored in edge list");
    if (u > v) throw validation_error("edge not stored with u < v");
    if (!seen.insert({u, v}).second) throw validation_error("duplicate edge stored");
  }
  std::vector<int> mark(n, -1);
  const std::vector<std::uint32_t>* splits[3] = {&train_idx, &val_idx, &test_idx};
  for (int s = 0; s < 3; ++s) {
    for (std::uint32_t i : *splits[s]) {
      if (i >= n) throw validation_error("split index out of range");
      if (mark[i] != -1) throw validation_error("splits overlap at node " + std::to_string(i));
      mark[i] = s;
    }
  }
}

raw_dataset load_dataset(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw parse_error("dataset directory not found: " + dir);

  raw_dataset ds;

  {  // labels.txt fixes N
    auto in = open_or_throw(root / "labels.txt");
    std::string line;
    std::size_t ln = 0;
    int max_label = -1;
    while (std::getline(in, line)) {
      ++ln;
      if (line.empty()) continue;
      char* end = nullptr;
      long v = std::strtol(line.c_str(), &end, 10);
      if (end == line.c_str()) bad_line((root / "labels.txt").string(), ln, "expected integer");
      if (v < 0) bad_line((root / "labels.txt").string(), ln, "negative label");
      ds.labels.push_back(static_cast<int>(v));
      max_label = std::max(max_label, static_cast<int>(v));
    }
    ds.n = ds.labels.size();
    ds.num_classes = static_cast<std::size_t>(max_label + 1);
    if (ds.n == 0) throw validation_error("labels.txt is empty");
  }

  {  // features.csv
    auto in = open_or_throw(root / "features.csv");
    const std::string fname = (root / "features.csv").string();
    std::string line;
    std::size_t ln = 0;
    std::vector<double> row;
    std::vector<double> all;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
      ++ln;
      if (line.empty()) continue;
      row.clear();
      const char* p = line.c_str();
      while (true) {
        char* end = nullptr;
        double v = std::strtod(p, &end);
        if (end == p) bad_line(fname, ln, "expected real number");
        row.push_back(v);
        p = end;
        if (*p == ',') {
          ++p;
        } else if (*p == '\0' || *p == '\r') {
          break;
        } else {
          bad_line(fname, ln, "unexpected character in row");
        }
      }
      if (dim == 0)
        dim = row.size();
      else if (row.size() != dim)
        bad_line(fname, ln, "inconsistent column count");
      all.insert(all.end(), row.begin(), row.end());
    }
    if (all.size() != ds.n * dim)
      throw validation_error("features.csv row count does not match labels.txt");
    ds.features = dense_matrix(ds.n, dim);
    std::copy(all.begin(), all.end(), ds.features.data());
  }

  {  // edges.tsv; duplicates collapse, input self-loops dropped
    auto in = open_or_throw(root / "edges.tsv");
    const std::string fname = (root / "edges.tsv").string();
    std::string line;
    std::size_t ln = 0;
    std::set<std::pair<std::uint32_t, std::uint32_t>> uniq;
    while (std::getline(in, line)) {
      ++ln;
      if (line.empty()) continue;
      char* end = nullptr;
      long a = std::strtol(line.c_str(), &end, 10);
      if (end == line.c_str() || *end != '\t') bad_line(fname, ln, "expected two tab-separated ints");
      const char* p2 = end + 1;
      long b = std::strtol(p2, &end, 10);
      if (end == p2) bad_line(fname, ln, "expected second endpoint");
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= ds.n ||
          static_cast<std::size_t>(b) >= ds.n)
        bad_line(fname, ln, "edge endpoint out of range");
      if (a == b) continue;
      auto u = static_cast<std::uint32_t>(std::min(a, b));
      auto v = static_cast<std::uint32_t>(std::max(a, b));
      uniq.insert({u, v});
    }
    ds.edges.assign(uniq.begin(), uniq.end());
  }

  {  // splits.json
    auto in = open_or_throw(root / "splits.json");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw parse_error((root / "splits.json").string() + ": " + e.what());
    }
    auto read_split = [&](const char* key) {
      if (!j.contains(key)) throw parse_error("splits.json: missing key " + std::string(key));
      std::vector<std::uint32_t> out;
      for (const auto& v : j.at(key)) out.push_back(v.get<std::uint32_t>());
      return out;
    };
    ds.train_idx = read_split("train");
    ds.val_idx = read_split("val");
    ds.test_idx = read_split("test");
  }

  ds.validate();
  return ds;
}

void save_dataset(const raw_dataset& ds, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root);
  {
    std::ofstream out(root / "labels.txt");
    for (int y : ds.labels) out << y << "\n";
  }
  {
    std::ofstream out(root / "features.csv");
    char buf[64];
    for (std::size_t i = 0; i < ds.features.rows(); ++i) {
      std::string line;
      for (std::size_t j = 0; j < ds.features.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", ds.features(i, j));
        if (j) line += ',';
        line += buf;
      }
      out << line << "\n";
    }
  }
  {
    std::ofstream out(root / "edges.tsv");
    for (auto [u, v] : ds.edges) out << u << "\t" << v << "\n";
  }
  {
    json j;
    j["train"] = ds.train_idx;
    j["val"] = ds.val_idx;
    j["test"] = ds.test_idx;
    std::ofstream out(root / "splits.json");
    out << j.dump() << "\n";
  }
}

std::string dataset_content_hash(const std::string& dir) {
  static const char* files[] = {"edges.tsv", "features.csv", "labels.txt", "splits.json"};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const char* data, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 0x100000001b3ULL;
    }
  };
  for (const char* f : files) {
    const fs::path p = fs::path(dir) / f;
    mix(f, std::string(f).size());
    std::ifstream in(p, std::ios::binary);
    if (!in) throw parse_error("cannot open " + p.string());
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) mix(buf, static_cast<std::size_t>(in.gcount()));
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace asgcn
