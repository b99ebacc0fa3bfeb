#include <moyal/io.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

namespace moyal::io {

using json = nlohmann::ordered_json;

namespace {

json header(SpinJ s) { return {{"tool", tool_version}, {"spin", spin_tag(s)}}; }

void check_header(const json& doc, int two_s) {
  if (!doc.contains("header")) return;
  const json& h = doc.at("header");
  if (h.contains("spin") && h.at("spin").get<std::string>() != spin_tag(SpinJ(two_s)))
    throw FormatError("file header spin tag " + h.at("spin").get<std::string>() +
                      " does not match two_s = " + std::to_string(two_s));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

int read_two_s(const json& doc) {
  if (!doc.contains("two_s") || !doc.at("two_s").is_number_integer())
    throw FormatError("missing integer field two_s");
  const int two_s = doc.at("two_s").get<int>();
  if (two_s < 1) throw FormatError("two_s must be >= 1");
  return two_s;
}

json operator_body(const Operator& a) {
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < a.dim(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (int c = 0; c < a.dim(); ++c) {
      rr.push_back(a(r, c).real());
      ri.push_back(a(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"header", header(a.spin())}, {"two_s", a.spin().two_s()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw FormatError("cannot parse '" + text + "' as a number in " + context);
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string csv_comments(SpinJ s) {
  return std::string("# ") + tool_version + "\n# spin " + spin_tag(s) + " two_s=" + std::to_string(s.two_s()) + "\n";
}

std::string symbol_table(const Symbol& sym, const char* column) {
  std::string out = csv_comments(sym.s) + "nu," + column + "\n";
  for (Eigen::Index nu = 0; nu < sym.values.size(); ++nu)
    out += std::to_string(nu + 1) + "," + format_complex(sym.values(nu)) + "\n";
  return out;
}

}  // namespace

std::string spin_tag(SpinJ s) {
  return s.two_s() % 2 == 0 ? std::to_string(s.two_s() / 2) : std::to_string(s.two_s()) + "/2";
}

std::string write_operator(const Operator& a) { return operator_body(a).dump(2) + "\n"; }

Operator read_operator(const std::string& text) {
  const json doc = parse_json(text);
  const int two_s = read_two_s(doc);
  check_header(doc, two_s);
  const SpinJ s(two_s);
  const int d = s.dim();
  auto matrix_field = [&](const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_array() || static_cast<int>(doc.at(key).size()) != d)
      throw FormatError(std::string("operator field '") + key + "' must be a " + std::to_string(d) + "x" +
                        std::to_string(d) + " array");
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r) {
      const json& row = doc.at(key).at(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<int>(row.size()) != d)
        throw FormatError(std::string("operator field '") + key + "' row " + std::to_string(r) + " has wrong length");
      for (int c = 0; c < d; ++c) {
        if (!row.at(static_cast<std::size_t>(c)).is_number())
          throw FormatError(std::string("operator field '") + key + "' holds a non-number");
        m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
    }
    return m;
  };
  const Eigen::MatrixXd re = matrix_field("re");
  const Eigen::MatrixXd im = matrix_field("im");
  ComplexMatrix m(d, d);
  m.real() = re;
  m.imag() = im;
  return Operator(s, std::move(m));
}

std::string write_constellation(const Constellation& c) {
  json pts = json::array();
  for (const auto& p : c.points()) pts.push_back({p.x(), p.y(), p.z()});
  const json doc = {{"header", header(c.spin())}, {"two_s", c.spin().two_s()}, {"points", std::move(pts)}};
  return doc.dump(2) + "\n";
}

Constellation read_constellation(const std::string& text) {
  const json doc = parse_json(text);
  const int two_s = read_two_s(doc);
  check_header(doc, two_s);
  const SpinJ s(two_s);
  if (!doc.contains("points") || !doc.at("points").is_array()) throw FormatError("constellation needs a points array");
  std::vector<Direction> pts;
  for (const json& p : doc.at("points")) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
      throw FormatError("each constellation point must be [x, y, z]");
    try {
      pts.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    } catch (const std::domain_error& e) {
      throw FormatError(std::string("constellation point: ") + e.what());
    }
  }
  if (pts.size() != static_cast<std::size_t>(s.n_points()))
    throw FormatError("constellation for two_s = " + std::to_string(two_s) + " needs " +
                      std::to_string(s.n_points()) + " points, file has " + std::to_string(pts.size()));
  return Constellation(s, std::move(pts));
}

std::string write_constellation_angles_csv(const Constellation& c) {
  std::string out = csv_comments(c.spin()) + "nu,theta,phi\n";
  for (std::size_t nu = 0; nu < c.size(); ++nu)
    out += std::to_string(nu + 1) + "," + format_double(c[nu].theta()) + "," + format_double(c[nu].phi()) + "\n";
  return out;
}

std::string write_symbol_csv(const Symbol& sym) {
  return symbol_table(sym, sym.variant == SymbolVariant::lower ? "value" : "dual_value");
}

std::string write_probabilities_csv(const Symbol& p) { return symbol_table(p, "p"); }

SymbolFile read_symbol_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  SymbolFile out;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("two_s=");
      if (pos != std::string::npos) out.two_s = static_cast<int>(parse_double(line.substr(pos + 6), "two_s comment"));
      continue;
    }
    if (!have_header) {
      if (line == "nu,value" || line == "nu,p")
        out.variant = SymbolVariant::lower;
      else if (line == "nu,dual_value")
        out.variant = SymbolVariant::upper;
      else
        throw FormatError("symbol CSV header must be nu,value, nu,dual_value or nu,p (got '" + line + "')");
      have_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw FormatError("symbol CSV line " + std::to_string(line_no) + " has no comma");
    const double nu = parse_double(line.substr(0, comma), "symbol CSV index");
    if (nu != static_cast<double>(out.values.size() + 1))
      throw FormatError("symbol CSV line " + std::to_string(line_no) + ": expected nu = " +
                        std::to_string(out.values.size() + 1));
    out.values.push_back(parse_complex(line.substr(comma + 1)));
  }
  if (!have_header) throw FormatError("symbol CSV has no header line");
  return out;
}

Symbol to_symbol(const SymbolFile& file, SpinJ s, std::uint64_t kernel_id) {
  if (file.two_s && *file.two_s != s.two_s())
    throw FormatError("symbol file is tagged two_s = " + std::to_string(*file.two_s) + ", expected " +
                      std::to_string(s.two_s()));
  if (file.values.size() != static_cast<std::size_t>(s.n_points()))
    throw FormatError("symbol file has " + std::to_string(file.values.size()) + " values, expected " +
                      std::to_string(s.n_points()));
  Symbol sym{s, Eigen::Map<const Eigen::VectorXcd>(file.values.data(), static_cast<Eigen::Index>(file.values.size())),
             file.variant, kernel_id};
  return sym;
}

std::string write_grid_csv(SpinJ s, const std::vector<SymbolSample>& grid) {
  std::string out = csv_comments(s) + "theta,phi,value\n";
  for (const auto& g : grid)
    out += format_double(g.theta) + "," + format_double(g.phi) + "," + format_complex(g.value) + "\n";
  return out;
}

std::string write_kernel_export(const KernelPair& kp, const std::string& constellation_path,
                                const std::string& constellation_sha256) {
  json ops = json::array();
  for (const auto& q : kp.dual_ops()) ops.push_back(operator_body(q));
  const json doc = {
      {"header", header(kp.spin())},
      {"manifest",
       {{"constellation", constellation_path},
        {"constellation_sha256", constellation_sha256},
        {"two_s", kp.spin().two_s()},
        {"count", kp.size()},
        {"method", to_string(kp.method())},
        {"gram_condition", kp.condition()}}},
      {"dual_ops", std::move(ops)},
  };
  return doc.dump(2) + "\n";
}

std::string format_report(const ValidityReport& rep) {
  std::ostringstream out;
  out << "det_y: " << rep.det_y << "\n"
      << "gram_condition: " << rep.gram_condition << "\n"
      << "allowed: " << (rep.allowed ? "true" : "false") << "\n";
  return out.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256_hex: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

cplx parse_complex(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw FormatError("empty complex scalar");
  const auto at = t.find('@');
  if (at != std::string::npos) {
    const double r = parse_double(t.substr(0, at), "complex scalar '" + t + "'");
    std::string angle = trim(t.substr(at + 1));
    double rad;
    if (ends_with(angle, "rad"))
      rad = parse_double(angle.substr(0, angle.size() - 3), "complex scalar '" + t + "'");
    else {
      if (ends_with(angle, "deg")) angle.resize(angle.size() - 3);
      rad = parse_double(angle, "complex scalar '" + t + "'") * M_PI / 180.0;
    }
    return std::polar(r, rad);
  }
  if (t.back() != 'i') return {parse_double(t, "complex scalar"), 0.0};
  const std::string body = t.substr(0, t.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t p = body.size(); p-- > 1;)
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  auto imag_part = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s[0] == '+' ? s.substr(1) : s, "complex scalar '" + t + "'");
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {parse_double(body.substr(0, split), "complex scalar '" + t + "'"), imag_part(body.substr(split))};
}

double parse_angle(const std::string& text) {
  const std::string t = trim(text);
  if (ends_with(t, "deg")) return parse_double(t.substr(0, t.size() - 3), "angle") * M_PI / 180.0;
  if (ends_with(t, "rad")) return parse_double(t.substr(0, t.size() - 3), "angle");
  return parse_double(t, "angle");
}

std::string format_complex(cplx z) {
  if (std::abs(z.imag()) <= 1e-13 * std::max(1.0, std::abs(z.real()))) return format_double(z.real());
  const std::string im = format_double(z.imag());
  return format_double(z.real()) + (im[0] == '-' ? "" : "+") + im + "i";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  if (path == "-") {
    std::cout << contents;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace moyal::io
