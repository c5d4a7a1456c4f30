#include "bplab/instance.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bplab {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<EdgeClass, std::string_view>, 6> kClassNames{{
    {EdgeClass::optimal, "optimal"},
    {EdgeClass::suboptimal, "suboptimal"},
    {EdgeClass::heavy, "heavy"},
    {EdgeClass::pad, "pad"},
    {EdgeClass::light, "light"},
    {EdgeClass::absent, "absent"},
}};

} // namespace

std::string_view to_string(EdgeClass c) {
  for (const auto& [cls, name] : kClassNames)
    if (cls == c)
      return name;
  return "?";
}

EdgeClass edge_class_from_string(std::string_view name) {
  for (const auto& [cls, label] : kClassNames)
    if (label == name)
      return cls;
  throw PreconditionError("unknown edge class '" + std::string(name) + "'");
}

Instance::Instance(int n, std::int64_t scale, std::vector<std::int64_t> scaled_weights,
                   std::optional<InstanceMeta> meta, std::vector<bool> support)
    : n_(n), scale_(scale), weights_(std::move(scaled_weights)), meta_(std::move(meta)), support_(std::move(support)) {
  if (n_ < 1)
    throw PreconditionError("instance needs n >= 1");
  if (scale_ < 1)
    throw PreconditionError("instance scale must be positive");
  const auto cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  if (weights_.size() != cells)
    throw PreconditionError("weight matrix must be n x n");
  if (!support_.empty() && support_.size() != cells)
    throw PreconditionError("support mask must be n x n");
  if (!support_.empty() && std::all_of(support_.begin(), support_.end(), [](bool b) { return b; }))
    support_.clear();
  if (meta_ && meta_->n == n_ && meta_->edge_class.size() != cells)
    throw PreconditionError("meta edge classes must be n x n");
}

Instance Instance::from_rationals(const std::vector<std::vector<Rational>>& weights) {
  const int n = static_cast<int>(weights.size());
  std::int64_t scale = 1;
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n)
      throw PreconditionError("weight matrix must be square");
    for (const auto& w : row)
      scale = lcm_checked(scale, to_int64(Rational(w.get_den())));
  }
  std::vector<std::int64_t> scaled;
  scaled.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (const auto& row : weights)
    for (const auto& w : row)
      scaled.push_back(to_int64(w * scale));
  return Instance(n, scale, std::move(scaled));
}

std::size_t Instance::index(int i, int j) const {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
}

std::int64_t Instance::max_abs_scaled() const {
  std::int64_t out = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (has_edge(i, j))
        out = std::max(out, std::abs(scaled(i, j)));
  return out;
}

std::int64_t Instance::to_scaled(const Rational& value) const {
  return to_int64(value * scale_);
}

bool Matching::contains(int i, int j) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::pair{i, j});
}

Matching Matching::from_partners(const std::vector<int>& partner) {
  Matching m;
  m.n = static_cast<int>(partner.size());
  for (int i = 0; i < m.n; ++i)
    if (partner[static_cast<std::size_t>(i)] != kUnresolved)
      m.pairs.emplace_back(i, partner[static_cast<std::size_t>(i)]);
  return m;
}

std::vector<int> Matching::left_partners() const {
  std::vector<int> out(static_cast<std::size_t>(n), kUnresolved);
  for (const auto& [i, j] : pairs)
    out[static_cast<std::size_t>(i)] = j;
  return out;
}

std::vector<int> Matching::right_partners() const {
  std::vector<int> out(static_cast<std::size_t>(n), kUnresolved);
  for (const auto& [i, j] : pairs)
    out[static_cast<std::size_t>(j)] = i;
  return out;
}

void validate_matching(const Matching& m) {
  std::vector<bool> left(static_cast<std::size_t>(m.n)), right(static_cast<std::size_t>(m.n));
  for (const auto& [i, j] : m.pairs) {
    if (i < 0 || j < 0 || i >= m.n || j >= m.n)
      throw PreconditionError("matching index out of range");
    if (left[static_cast<std::size_t>(i)] || right[static_cast<std::size_t>(j)])
      throw PreconditionError("matching repeats a node");
    left[static_cast<std::size_t>(i)] = right[static_cast<std::size_t>(j)] = true;
  }
}

std::string instance_to_json(const Instance& inst) {
  const int n = inst.size();
  ojson doc;
  doc["n"] = n;
  doc["scale"] = inst.scale();
  ojson rows = ojson::array();
  for (int i = 0; i < n; ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < n; ++j)
      row.push_back(inst.has_edge(i, j) ? inst.scaled(i, j) : 0);
    rows.push_back(std::move(row));
  }
  doc["weights"] = std::move(rows);

  if (const auto& meta = inst.meta()) {
    ojson m;
    m["family"] = meta->family;
    m["n"] = meta->n;
    m["w_max"] = to_string(meta->w_max);
    m["eps"] = to_string(meta->eps);
    m["c"] = meta->c;
    m["primes"] = meta->primes;
    m["embedded"] = meta->embedded;
    m["shift"] = to_string(meta->shift);
    ojson classes = ojson::array();
    for (int i = 0; i < meta->n; ++i) {
      ojson row = ojson::array();
      for (int j = 0; j < meta->n; ++j)
        row.push_back(std::string(to_string(meta->classify(i, j))));
      classes.push_back(std::move(row));
    }
    m["edge_class"] = std::move(classes);
    m["cycle_of_left"] = meta->cycle_of_left;
    m["cycle_of_right"] = meta->cycle_of_right;
    doc["meta"] = std::move(m);
  } else {
    doc["meta"] = nullptr;
  }
  return doc.dump(1) + "\n";
}

Instance instance_from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw PreconditionError(std::string("instance JSON: ") + e.what());
  }
  try {
    const int n = doc.at("n").get<int>();
    const auto scale = doc.at("scale").get<std::int64_t>();
    const auto& rows = doc.at("weights");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw PreconditionError("instance JSON: weights must have n rows");
    std::vector<std::int64_t> scaled;
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw PreconditionError("instance JSON: weights must have n columns");
      for (const auto& w : row) {
        if (!w.is_number_integer())
          throw PreconditionError("instance JSON: weights must be integers");
        scaled.push_back(w.get<std::int64_t>());
      }
    }

    std::optional<InstanceMeta> meta;
    std::vector<bool> support;
    if (doc.contains("meta") && !doc["meta"].is_null()) {
      const auto& m = doc["meta"];
      InstanceMeta out;
      out.family = m.at("family").get<std::string>();
      out.n = m.at("n").get<int>();
      out.w_max = parse_rational(m.at("w_max").get<std::string>());
      out.eps = parse_rational(m.at("eps").get<std::string>());
      out.c = m.at("c").get<int>();
      out.primes = m.at("primes").get<std::vector<int>>();
      out.embedded = m.at("embedded").get<bool>();
      out.shift = parse_rational(m.value("shift", std::string("0")));
      if (out.n != n)
        throw PreconditionError("instance JSON: meta.n differs from n");
      for (const auto& row : m.at("edge_class"))
        for (const auto& name : row)
          out.edge_class.push_back(edge_class_from_string(name.get<std::string>()));
      out.cycle_of_left = m.at("cycle_of_left").get<std::vector<int>>();
      out.cycle_of_right = m.at("cycle_of_right").get<std::vector<int>>();
      if (std::any_of(out.edge_class.begin(), out.edge_class.end(), [](EdgeClass c) { return c == EdgeClass::absent; })) {
        support.reserve(out.edge_class.size());
        for (EdgeClass c : out.edge_class)
          support.push_back(c != EdgeClass::absent);
      }
      meta = std::move(out);
    }
    return Instance(n, scale, std::move(scaled), std::move(meta), std::move(support));
  } catch (const ojson::exception& e) {
    throw PreconditionError(std::string("instance JSON: ") + e.what());
  }
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw PreconditionError("cannot write " + path);
  out << instance_to_json(inst);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw PreconditionError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

} // namespace bplab
