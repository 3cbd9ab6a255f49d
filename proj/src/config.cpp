#include "affdim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "affdim/error.hpp"

namespace affdim {

namespace {

// Parsed right-hand side: a number or a bracketed list.
struct Value {
  bool is_list = false;
  double number = 0.0;
  std::vector<Value> items;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line, std::string key) : text_(text), line_(line), key_(std::move(key)) {}

  /// Top level: one or more comma-separated values.
  std::vector<Value> parse_all() {
    std::vector<Value> out;
    skip_ws();
    if (pos_ == text_.size()) fail("missing value");
    out.push_back(parse_value());
    skip_ws();
    while (pos_ < text_.size()) {
      expect(',');
      out.push_back(parse_value());
      skip_ws();
    }
    return out;
  }

 private:
  Value parse_value() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      Value v;
      v.is_list = true;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      v.items.push_back(parse_value());
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        v.items.push_back(parse_value());
        skip_ws();
      }
      expect(']');
      return v;
    }
    return parse_number();
  }

  Value parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                   text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == 'e' ||
                                   text_[pos_] == 'E' || text_[pos_] == '/')) {
      ++pos_;
    }
    const std::string_view token = text_.substr(start, pos_ - start);
    if (token.empty()) fail("expected a number or '['");
    Value v;
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) {
      v.number = to_double(token);
    } else {
      const double p = to_double(token.substr(0, slash));
      const double q = to_double(token.substr(slash + 1));
      if (q == 0.0) fail("zero denominator in '" + std::string(token) + "'");
      v.number = p / q;
    }
    return v;
  }

  double to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(x)) {
      fail("invalid number '" + std::string(s) + "'");
    }
    return x;
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(msg, line_, key_); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::string key_;
};

struct Entry {
  std::string key;
  std::string raw;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

[[noreturn]] void semantic(const std::string& msg, const std::string& key) { throw ConfigError(msg, 0, key); }

std::vector<Value> values_of(const Entry& e, const std::string& path) { return ValueParser(e.raw, e.line, path).parse_all(); }

Vector vector_of(const Value& v, int dim, const std::string& path, std::size_t line) {
  if (!v.is_list) throw ConfigError("expected a vector [x, y, ...]", line, path);
  if (static_cast<int>(v.items.size()) != dim) {
    throw ConfigError("expected " + std::to_string(dim) + " components, got " + std::to_string(v.items.size()), line, path);
  }
  Vector out(dim);
  for (int i = 0; i < dim; ++i) {
    const auto& item = v.items[static_cast<std::size_t>(i)];
    if (item.is_list) throw ConfigError("vector components must be numbers", line, path);
    out[i] = item.number;
  }
  return out;
}

Matrix matrix_of(const Value& v, int dim, const std::string& path, std::size_t line) {
  if (!v.is_list || static_cast<int>(v.items.size()) != dim) {
    throw ConfigError("expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix [[..], ..]", line, path);
  }
  Matrix m(dim);
  for (int r = 0; r < dim; ++r) {
    const Vector row = vector_of(v.items[static_cast<std::size_t>(r)], dim, path, line);
    for (int c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

double scalar_of(const Entry& e, const std::string& path) {
  const auto vals = values_of(e, path);
  if (vals.size() != 1 || vals[0].is_list) throw ConfigError("expected a single number", e.line, path);
  return vals[0].number;
}

template <class Int>
Int integer_of(const Entry& e, const std::string& path, Int lo) {
  const std::string s = trim(e.raw);
  Int x{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw ConfigError("expected an integer, got '" + s + "'", e.line, path);
  if (x < lo) throw ConfigError("must be at least " + std::to_string(lo), e.line, path);
  return x;
}

std::vector<Vector> point_list(const Value& v, int dim, const std::string& path, std::size_t line) {
  if (!v.is_list) throw ConfigError("expected a list of points [[..], ..]", line, path);
  std::vector<Vector> out;
  for (const auto& item : v.items) out.push_back(vector_of(item, dim, path, line));
  return out;
}

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError("malformed section header '" + line + "'", line_no, "");
      sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, "");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no, "");
    if (sections.empty()) throw ConfigError("key '" + key + "' appears before any [section]", line_no, key);
    sections.back().entries.push_back({key, trim(line.substr(eq + 1)), line_no});
  }
  return sections;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"system", {"dim"}},
      {"map", {"linear", "translation"}},
      {"condensation", {"circle", "segment", "polygon", "points"}},
      {"ball", {"center", "radius"}},
      {"budgets", {"kmax", "leaves", "words"}},
      {"scales", {"jmin", "jmax", "window"}},
      {"tolerances", {"sandwich", "kappa", "projection"}},
      {"cosc", {"rect"}},
      {"kappa", {"jmin", "jmax"}},
      {"run", {"seed"}},
  };
  return keys;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

Ifs RunConfig::ifs() const { return Ifs(maps); }

CondensationSet RunConfig::condensation_set() const { return CondensationSet(dim, condensation); }

System RunConfig::system() const { return make_system(ifs(), condensation_set(), ball); }

RunConfig parse_config(const std::string& text) {
  const auto sections = split_sections(text);
  RunConfig cfg;

  // Unknown sections/keys and duplicate singleton keys are syntax-level errors with line numbers.
  std::set<std::string> singleton_seen;
  for (const auto& sec : sections) {
    const auto it = known_keys().find(sec.name);
    if (it == known_keys().end()) throw ConfigError("unknown section [" + sec.name + "]", sec.line, sec.name);
    if (sec.name != "map" && sec.name != "condensation" && !singleton_seen.insert(sec.name).second) {
      throw ConfigError("section [" + sec.name + "] given twice", sec.line, sec.name);
    }
    std::set<std::string> seen;
    for (const auto& e : sec.entries) {
      if (!it->second.count(e.key)) throw ConfigError("unknown key '" + e.key + "'", e.line, sec.name + "." + e.key);
      if (sec.name != "condensation" && !seen.insert(e.key).second) {
        throw ConfigError("key '" + e.key + "' given twice", e.line, sec.name + "." + e.key);
      }
    }
  }

  for (const auto& sec : sections) {
    if (sec.name != "system") continue;
    for (const auto& e : sec.entries) cfg.dim = integer_of<int>(e, "system.dim", 2);
  }
  if (cfg.dim > kMaxDim) semantic("dimension " + std::to_string(cfg.dim) + " exceeds the supported maximum of " +
                                      std::to_string(kMaxDim), "system.dim");
  const int n = cfg.dim;

  std::size_t map_index = 0;
  for (const auto& sec : sections) {
    if (sec.name == "map") {
      ++map_index;
      const std::string base = "map[" + std::to_string(map_index) + "]";
      std::optional<Matrix> linear;
      std::optional<Vector> translation;
      for (const auto& e : sec.entries) {
        const std::string path = base + "." + e.key;
        const auto vals = values_of(e, path);
        if (vals.size() != 1) throw ConfigError("expected a single bracketed value", e.line, path);
        if (e.key == "linear") linear = matrix_of(vals[0], n, path, e.line);
        if (e.key == "translation") translation = vector_of(vals[0], n, path, e.line);
      }
      if (!linear) semantic("missing 'linear'", base + ".linear");
      if (!translation) translation = Vector(n);
      double a1 = 0.0;
      try {
        a1 = singular_values(*linear).largest();
      } catch (const InvalidMatrix&) {
        semantic("map " + std::to_string(map_index) + " has a singular linear part", base + ".linear");
      }
      if (!(a1 < 1.0)) {
        semantic("map " + std::to_string(map_index) + " is not contracting (alpha_1 = " + format_double(a1) + ")",
                 base + ".linear");
      }
      cfg.maps.emplace_back(*linear, *translation);
    } else if (sec.name == "condensation") {
      for (const auto& e : sec.entries) {
        const std::string path = "condensation." + e.key;
        const auto vals = values_of(e, path);
        if (e.key == "circle") {
          if (n != 2) semantic("circles need dim = 2", path);
          if (vals.size() != 2 || vals[1].is_list) throw ConfigError("expected 'circle = [cx, cy], r'", e.line, path);
          if (!(vals[1].number > 0.0)) throw ConfigError("radius must be positive", e.line, path);
          cfg.condensation.emplace_back(Circle{vector_of(vals[0], n, path, e.line), vals[1].number});
        } else if (e.key == "segment") {
          if (vals.size() != 2) throw ConfigError("expected 'segment = [..], [..]'", e.line, path);
          cfg.condensation.emplace_back(Segment{vector_of(vals[0], n, path, e.line), vector_of(vals[1], n, path, e.line)});
        } else if (e.key == "polygon") {
          if (n != 2) semantic("polygons need dim = 2", path);
          if (vals.size() != 1) throw ConfigError("expected 'polygon = [[..], ..]'", e.line, path);
          auto pts = point_list(vals[0], n, path, e.line);
          if (pts.size() < 3) throw ConfigError("a polygon needs at least 3 vertices", e.line, path);
          cfg.condensation.emplace_back(Polygon{std::move(pts)});
        } else {
          if (vals.size() != 1) throw ConfigError("expected 'points = [[..], ..]'", e.line, path);
          auto pts = point_list(vals[0], n, path, e.line);
          if (pts.empty()) throw ConfigError("point list is empty", e.line, path);
          cfg.condensation.emplace_back(PointCloud{std::move(pts)});
        }
      }
    } else if (sec.name == "ball") {
      std::optional<Vector> center;
      std::optional<double> radius;
      for (const auto& e : sec.entries) {
        const std::string path = "ball." + e.key;
        if (e.key == "center") {
          const auto vals = values_of(e, path);
          if (vals.size() != 1) throw ConfigError("expected a single vector", e.line, path);
          center = vector_of(vals[0], n, path, e.line);
        } else {
          radius = scalar_of(e, path);
          if (!(*radius > 0.0)) throw ConfigError("radius must be positive", e.line, path);
        }
      }
      if (!center) semantic("missing 'center'", "ball.center");
      if (!radius) semantic("missing 'radius'", "ball.radius");
      cfg.ball = BoundingBall{*center, *radius};
    } else if (sec.name == "budgets") {
      for (const auto& e : sec.entries) {
        const std::string path = "budgets." + e.key;
        if (e.key == "kmax") cfg.k_max = integer_of<int>(e, path, 1);
        if (e.key == "leaves") cfg.leaf_budget = integer_of<std::uint64_t>(e, path, 1);
        if (e.key == "words") cfg.word_budget = integer_of<std::uint64_t>(e, path, 1);
      }
    } else if (sec.name == "scales") {
      for (const auto& e : sec.entries) {
        const std::string path = "scales." + e.key;
        if (e.key == "jmin") cfg.j_min = integer_of<int>(e, path, 1);
        if (e.key == "jmax") cfg.j_max = integer_of<int>(e, path, 1);
        if (e.key == "window") {
          try {
            cfg.window = parse_window(e.raw);
          } catch (const DomainError& err) {
            throw ConfigError(err.what(), e.line, path);
          }
        }
      }
    } else if (sec.name == "tolerances") {
      for (const auto& e : sec.entries) {
        const std::string path = "tolerances." + e.key;
        const double v = scalar_of(e, path);
        if (!(v >= 0.0)) throw ConfigError("must be non-negative", e.line, path);
        if (e.key == "sandwich") cfg.sandwich_tol = v;
        if (e.key == "kappa") cfg.kappa_min = v;
        if (e.key == "projection") cfg.projection_min = v;
      }
    } else if (sec.name == "cosc") {
      for (const auto& e : sec.entries) {
        const std::string path = "cosc.rect";
        if (n != 2) semantic("rectangular COSC check needs dim = 2", path);
        const auto vals = values_of(e, path);
        if (vals.size() != 1 || !vals[0].is_list || vals[0].items.size() != 2) {
          throw ConfigError("expected 'rect = [[xlo, xhi], [ylo, yhi]]'", e.line, path);
        }
        const Vector xr = vector_of(vals[0].items[0], 2, path, e.line);
        const Vector yr = vector_of(vals[0].items[1], 2, path, e.line);
        if (!(xr[0] < xr[1] && yr[0] < yr[1])) throw ConfigError("rectangle ranges must satisfy lo < hi", e.line, path);
        cfg.cosc_rect = Rect{Vector{xr[0], yr[0]}, Vector{xr[1], yr[1]}};
      }
    } else if (sec.name == "kappa") {
      for (const auto& e : sec.entries) {
        const std::string path = "kappa." + e.key;
        if (e.key == "jmin") cfg.kappa_j_min = integer_of<int>(e, path, 0);
        if (e.key == "jmax") cfg.kappa_j_max = integer_of<int>(e, path, 0);
      }
    } else if (sec.name == "run") {
      for (const auto& e : sec.entries) cfg.seed = integer_of<std::uint64_t>(e, "run.seed", 0);
    }
  }

  if (cfg.maps.empty()) semantic("at least one [map] section is required", "map");
  if (cfg.condensation.empty()) semantic("the condensation set is empty", "condensation");
  if (cfg.j_max < cfg.j_min + 3) semantic("need jmax >= jmin + 3 (at least 4 scales)", "scales.jmax");
  if (cfg.window && (cfg.window->lo < cfg.j_min || cfg.window->hi > cfg.j_max)) {
    semantic("window must lie inside [jmin, jmax]", "scales.window");
  }
  if (cfg.kappa_j_max < cfg.kappa_j_min) semantic("need kappa.jmax >= kappa.jmin", "kappa.jmax");

  // Remaining structural checks (ball invariants, dimension agreement) reuse the model's validation.
  try {
    (void)cfg.system();
  } catch (const Error& err) {
    semantic(err.what(), cfg.ball ? "ball" : "system");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string vec_text(const Vector& v) {
  std::string s = "[";
  for (int i = 0; i < v.dim(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

std::string mat_text(const Matrix& m) {
  std::string s = "[";
  for (int r = 0; r < m.dim(); ++r) {
    if (r) s += ", ";
    Vector row(m.dim());
    for (int c = 0; c < m.dim(); ++c) row[c] = m(r, c);
    s += vec_text(row);
  }
  return s + "]";
}

std::string points_text(const std::vector<Vector>& pts) {
  std::string s = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ", ";
    s += vec_text(pts[i]);
  }
  return s + "]";
}

bool same_points(const std::vector<Vector>& a, const std::vector<Vector>& b) { return a == b; }

bool same_primitive(const Primitive& a, const Primitive& b) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<Circle>(&a)) {
    const auto& d = std::get<Circle>(b);
    return c->center == d.center && c->radius == d.radius;
  }
  if (const auto* s = std::get_if<Segment>(&a)) {
    const auto& t = std::get<Segment>(b);
    return s->p == t.p && s->q == t.q;
  }
  if (const auto* p = std::get_if<Polygon>(&a)) return same_points(p->vertices, std::get<Polygon>(b).vertices);
  return same_points(std::get<PointCloud>(a).points, std::get<PointCloud>(b).points);
}

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[system]\ndim = " << c.dim << "\n";
  for (const auto& m : c.maps) {
    out << "\n[map]\nlinear = " << mat_text(m.linear()) << "\ntranslation = " << vec_text(m.translation()) << "\n";
  }
  out << "\n[condensation]\n";
  for (const auto& p : c.condensation) {
    if (const auto* ci = std::get_if<Circle>(&p)) {
      out << "circle = " << vec_text(ci->center) << ", " << format_double(ci->radius) << "\n";
    } else if (const auto* s = std::get_if<Segment>(&p)) {
      out << "segment = " << vec_text(s->p) << ", " << vec_text(s->q) << "\n";
    } else if (const auto* pg = std::get_if<Polygon>(&p)) {
      out << "polygon = " << points_text(pg->vertices) << "\n";
    } else {
      out << "points = " << points_text(std::get<PointCloud>(p).points) << "\n";
    }
  }
  if (c.ball) out << "\n[ball]\ncenter = " << vec_text(c.ball->center) << "\nradius = " << format_double(c.ball->radius) << "\n";
  out << "\n[budgets]\nkmax = " << c.k_max << "\nleaves = " << c.leaf_budget << "\nwords = " << c.word_budget << "\n";
  out << "\n[scales]\njmin = " << c.j_min << "\njmax = " << c.j_max << "\n";
  if (c.window) out << "window = " << c.window->lo << ":" << c.window->hi << "\n";
  out << "\n[tolerances]\nsandwich = " << format_double(c.sandwich_tol) << "\nkappa = " << format_double(c.kappa_min)
      << "\nprojection = " << format_double(c.projection_min) << "\n";
  if (c.cosc_rect) {
    out << "\n[cosc]\nrect = [[" << format_double(c.cosc_rect->lo[0]) << ", " << format_double(c.cosc_rect->hi[0]) << "], ["
        << format_double(c.cosc_rect->lo[1]) << ", " << format_double(c.cosc_rect->hi[1]) << "]]\n";
  }
  out << "\n[kappa]\njmin = " << c.kappa_j_min << "\njmax = " << c.kappa_j_max << "\n";
  out << "\n[run]\nseed = " << c.seed << "\n";
  return out.str();
}

bool same_config(const RunConfig& a, const RunConfig& b) {
  if (a.dim != b.dim || a.maps.size() != b.maps.size() || a.condensation.size() != b.condensation.size()) return false;
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    if (!(a.maps[i].linear() == b.maps[i].linear()) || !(a.maps[i].translation() == b.maps[i].translation())) return false;
  }
  for (std::size_t i = 0; i < a.condensation.size(); ++i) {
    if (!same_primitive(a.condensation[i], b.condensation[i])) return false;
  }
  if (a.ball.has_value() != b.ball.has_value()) return false;
  if (a.ball && (!(a.ball->center == b.ball->center) || a.ball->radius != b.ball->radius)) return false;
  if (a.window.has_value() != b.window.has_value()) return false;
  if (a.window && (a.window->lo != b.window->lo || a.window->hi != b.window->hi)) return false;
  if (a.cosc_rect.has_value() != b.cosc_rect.has_value()) return false;
  if (a.cosc_rect && (!(a.cosc_rect->lo == b.cosc_rect->lo) || !(a.cosc_rect->hi == b.cosc_rect->hi))) return false;
  return a.k_max == b.k_max && a.leaf_budget == b.leaf_budget && a.word_budget == b.word_budget && a.j_min == b.j_min &&
         a.j_max == b.j_max && a.sandwich_tol == b.sandwich_tol && a.kappa_min == b.kappa_min &&
         a.projection_min == b.projection_min && a.kappa_j_min == b.kappa_j_min && a.kappa_j_max == b.kappa_j_max &&
         a.seed == b.seed;
}

}  // namespace affdim
