#pragma once

// Text instance format:
//
//   NAME <string>
//   N <n> M <m>
//   VEHICLES
//   <Q_u> <f_u> <r_u> <m_u>            m lines, m_u = -1 for unlimited
//   NODES
//   <id> <x> <y> <q>                   n+1 lines, id 0 is the depot
//   MATRIX                             optional, (n+1)^2 row-major values
//   LENGTHS                            optional, n+1 values
//
// Without a MATRIX section distances are Euclidean, unrounded. Blank lines
// and lines starting with '#' are ignored.

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "minereduce/model.hpp"

namespace minereduce {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

// Whitespace tokens tagged with their 1-based line number.
class TokenStream {
 public:
  explicit TokenStream(std::string_view text) {
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line;
      std::string_view row = text.substr(pos, end - pos);
      const auto first = row.find_first_not_of(" \t\r");
      if (first != std::string_view::npos && row[first] != '#') {
        std::istringstream in{std::string(row)};
        std::string tok;
        while (in >> tok) tokens_.push_back({std::move(tok), line});
      }
      if (end == text.size()) break;
      pos = end + 1;
    }
    // End-of-input errors point at the last line with content.
    last_line_ = tokens_.empty() ? line : tokens_.back().line;
  }

  bool done() const { return next_ >= tokens_.size(); }
  std::size_t line() const { return done() ? last_line_ : tokens_[next_].line; }
  const std::string& peek() const {
    static const std::string none;
    return done() ? none : tokens_[next_].text;
  }

  std::string word(std::string_view what) {
    if (done()) throw ParseError(last_line_, "unexpected end of input, expected " + std::string(what));
    return tokens_[next_++].text;
  }

  void expect(std::string_view keyword) {
    const std::size_t at = line();
    const std::string got = word(keyword);
    if (got != keyword) throw ParseError(at, "expected '" + std::string(keyword) + "', found '" + got + "'");
  }

  double number(std::string_view what) {
    const std::size_t at = line();
    const std::string tok = word(what);
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(at, "expected number for " + std::string(what) + ", found '" + tok + "'");
    }
  }

  long long integer(std::string_view what) {
    const std::size_t at = line();
    const double v = number(what);
    if (v != static_cast<double>(static_cast<long long>(v)))
      throw ParseError(at, "expected integer for " + std::string(what));
    return static_cast<long long>(v);
  }

 private:
  struct Token {
    std::string text;
    std::size_t line;
  };
  std::vector<Token> tokens_;
  std::size_t next_ = 0;
  std::size_t last_line_ = 0;
};

// Shortest text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline Instance parse_instance(std::string_view text) {
  detail::TokenStream in(text);
  Instance inst;

  in.expect("NAME");
  inst.name = in.word("instance name");
  in.expect("N");
  const std::size_t header_line = in.line();
  const long long n = in.integer("customer count");
  in.expect("M");
  const long long m = in.integer("vehicle type count");
  if (n < 0 || m < 1) throw ParseError(header_line, "need N >= 0 and M >= 1");

  in.expect("VEHICLES");
  for (long long u = 0; u < m; ++u) {
    const std::size_t at = in.line();
    VehicleType v;
    v.capacity = in.number("capacity");
    v.fixed_cost = in.number("fixed cost");
    v.unit_cost = in.number("unit cost");
    const long long count = in.integer("vehicle count");
    if (count < -1) throw ParseError(at, "vehicle count must be -1 (unlimited) or >= 0");
    if (count >= 0) v.count = static_cast<std::size_t>(count);
    if (!(v.capacity > 0)) throw ParseError(at, "capacity must be positive");
    if (v.fixed_cost < 0 || v.unit_cost < 0) throw ParseError(at, "vehicle costs must be nonnegative");
    inst.fleet.push_back(v);
  }

  in.expect("NODES");
  std::vector<Point> points;
  for (long long i = 0; i <= n; ++i) {
    const std::size_t at = in.line();
    Node node;
    const long long id = in.integer("node id");
    if (id != i) throw ParseError(at, "node ids must be contiguous from 0; expected " + std::to_string(i) + ", found " + std::to_string(id));
    node.id = static_cast<VertexId>(id);
    Point p;
    p.x = in.number("x");
    p.y = in.number("y");
    node.coords = p;
    node.demand = in.number("demand");
    if (node.demand < 0) throw ParseError(at, "negative demand at node " + std::to_string(id));
    if (i == 0 && node.demand != 0) throw ParseError(at, "depot demand must be 0");
    points.push_back(p);
    inst.nodes.push_back(node);
  }

  const std::size_t dim = static_cast<std::size_t>(n) + 1;
  bool have_matrix = false;
  while (!in.done()) {
    const std::size_t at = in.line();
    const std::string section = in.word("section");
    if (section == "MATRIX") {
      inst.dist = DistanceMatrix(dim);
      for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
          if (in.done() || in.peek() == "LENGTHS")
            throw ParseError(in.line(), "MATRIX needs " + std::to_string(dim * dim) + " values");
          const std::size_t vl = in.line();
          const double d = in.number("distance");
          if (!(d >= 0)) throw ParseError(vl, "negative distance");
          if (a == b && d != 0) throw ParseError(vl, "nonzero self distance at node " + std::to_string(a));
          inst.dist.at(static_cast<VertexId>(a), static_cast<VertexId>(b)) = d;
        }
      have_matrix = true;
    } else if (section == "LENGTHS") {
      for (std::size_t a = 0; a < dim; ++a) {
        if (in.done() || in.peek() == "MATRIX")
          throw ParseError(in.line(), "LENGTHS needs " + std::to_string(dim) + " values");
        const std::size_t vl = in.line();
        const double l = in.number("length");
        if (l < 0) throw ParseError(vl, "negative length");
        if (a == 0 && l != 0) throw ParseError(vl, "depot length must be 0");
        inst.nodes[a].length = l;
      }
    } else {
      throw ParseError(at, "unknown section '" + section + "'");
    }
  }
  if (!have_matrix) inst.dist = euclidean_distances(points);

  try {
    validate(inst);
  } catch (const StructuralError& e) {
    throw ParseError(in.line(), e.what());
  }
  return inst;
}

inline Instance read_instance(std::istream& is) {
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_instance(buf.str());
}

struct WriteOptions {
  bool matrix = true;  // emit MATRIX even for coordinate instances
};

inline void write_instance(std::ostream& os, const Instance& inst, WriteOptions options = {}) {
  using detail::format_double;
  os << "NAME " << (inst.name.empty() ? "unnamed" : inst.name) << '\n';
  os << "N " << inst.customer_count() << " M " << inst.fleet.size() << '\n';
  os << "VEHICLES\n";
  for (const auto& v : inst.fleet)
    os << format_double(v.capacity) << ' ' << format_double(v.fixed_cost) << ' ' << format_double(v.unit_cost) << ' '
       << (v.count ? static_cast<long long>(*v.count) : -1LL) << '\n';
  os << "NODES\n";
  bool lengths = false;
  for (const auto& node : inst.nodes) {
    const Point p = node.coords.value_or(Point{});
    os << node.id << ' ' << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(node.demand)
       << '\n';
    lengths = lengths || node.length != 0;
  }
  if (options.matrix) {
    os << "MATRIX\n";
    for (std::size_t a = 0; a < inst.vertex_count(); ++a) {
      const auto row = inst.dist.row(static_cast<VertexId>(a));
      for (std::size_t b = 0; b < row.size(); ++b) os << (b ? " " : "") << format_double(row[b]);
      os << '\n';
    }
  }
  if (lengths) {
    os << "LENGTHS\n";
    for (std::size_t a = 0; a < inst.vertex_count(); ++a) os << (a ? " " : "") << format_double(inst.nodes[a].length);
    os << '\n';
  }
}

inline std::string format_instance(const Instance& inst, WriteOptions options = {}) {
  std::ostringstream os;
  write_instance(os, inst, options);
  return os.str();
}

// Converts a CVRPLIB/TSPLIB-style file (NODE_COORD_SECTION with EUC_2D, or
// EXPLICIT FULL_MATRIX weights, DEMAND_SECTION, DEPOT_SECTION) plus a fleet
// description into an instance. The depot becomes vertex 0 and the other
// nodes keep their file order.
inline Instance convert_cvrplib(std::string_view text, std::vector<VehicleType> fleet) {
  detail::TokenStream in(text);
  std::string name = "unnamed";
  std::size_t dim = 0;
  std::string weight_type = "EUC_2D";
  std::string weight_format;
  std::vector<Point> coords;
  std::vector<double> demand;
  std::vector<double> weights;
  long long depot = 1;

  auto value = [&](const std::string& key) {
    // "KEY : value" or "KEY: value" or "KEY value"
    std::string v = in.word(key);
    if (v == ":") v = in.word(key);
    return v;
  };
  while (!in.done()) {
    const std::size_t at = in.line();
    std::string key = in.word("keyword");
    if (!key.empty() && key.back() == ':') key.pop_back();
    if (key == "NAME") {
      name = value(key);
    } else if (key == "DIMENSION") {
      dim = static_cast<std::size_t>(std::stoll(value(key)));
    } else if (key == "EDGE_WEIGHT_TYPE") {
      weight_type = value(key);
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      weight_format = value(key);
    } else if (key == "TYPE" || key == "COMMENT" || key == "CAPACITY" || key == "VEHICLES") {
      // Skip the rest of the line.
      value(key);
      while (!in.done() && in.line() == at) in.word("value");
    } else if (key == "NODE_COORD_SECTION") {
      coords.resize(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        const long long id = in.integer("node id");
        if (id < 1 || static_cast<std::size_t>(id) > dim) throw ParseError(in.line(), "node id out of range");
        coords[static_cast<std::size_t>(id - 1)] = {in.number("x"), in.number("y")};
      }
    } else if (key == "DEMAND_SECTION") {
      demand.resize(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        const long long id = in.integer("node id");
        if (id < 1 || static_cast<std::size_t>(id) > dim) throw ParseError(in.line(), "node id out of range");
        demand[static_cast<std::size_t>(id - 1)] = in.number("demand");
      }
    } else if (key == "EDGE_WEIGHT_SECTION") {
      if (weight_format != "FULL_MATRIX") throw ParseError(at, "only FULL_MATRIX edge weights are supported");
      weights.resize(dim * dim);
      for (auto& w : weights) w = in.number("edge weight");
    } else if (key == "DEPOT_SECTION") {
      depot = in.integer("depot id");
      while (!in.done() && in.peek() != "EOF") in.word("depot list");
    } else if (key == "EOF") {
      break;
    } else {
      throw ParseError(at, "unsupported keyword '" + key + "'");
    }
  }
  if (dim == 0) throw ParseError(in.line(), "missing DIMENSION");
  if (demand.size() != dim) throw ParseError(in.line(), "missing DEMAND_SECTION");
  if (depot < 1 || static_cast<std::size_t>(depot) > dim) throw ParseError(in.line(), "depot id out of range");

  std::vector<std::size_t> order{static_cast<std::size_t>(depot - 1)};
  for (std::size_t k = 0; k < dim; ++k)
    if (k != order.front()) order.push_back(k);

  Instance inst;
  inst.name = name;
  inst.fleet = std::move(fleet);
  for (std::size_t k = 0; k < dim; ++k) {
    Node node;
    node.id = static_cast<VertexId>(k);
    node.demand = k == 0 ? 0 : demand[order[k]];
    if (!coords.empty()) node.coords = coords[order[k]];
    inst.nodes.push_back(node);
  }
  if (weight_type == "EXPLICIT") {
    if (weights.empty()) throw ParseError(in.line(), "missing EDGE_WEIGHT_SECTION");
    inst.dist = DistanceMatrix(dim);
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        inst.dist.at(static_cast<VertexId>(a), static_cast<VertexId>(b)) = weights[order[a] * dim + order[b]];
  } else if (weight_type == "EUC_2D") {
    if (coords.empty()) throw ParseError(in.line(), "missing NODE_COORD_SECTION");
    std::vector<Point> pts;
    for (const auto& node : inst.nodes) pts.push_back(*node.coords);
    inst.dist = euclidean_distances(pts);
  } else {
    throw ParseError(in.line(), "unsupported EDGE_WEIGHT_TYPE " + weight_type);
  }
  try {
    validate(inst);
  } catch (const StructuralError& e) {
    throw ParseError(in.line(), e.what());
  }
  return inst;
}

}  // namespace minereduce
