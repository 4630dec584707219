#include "bohm/frame_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace bohm {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || (errno == ERANGE && std::isinf(v)))
    throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

void write_frame(std::ostream& out, const SpinorField& field, std::string_view config_hash) {
  const Grid1D& g = field.grid;
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << "# bohm-frame v1\n";
  out << "# x_min=" << format_double(g.x_min()) << " x_max=" << format_double(g.x_max())
      << " n_points=" << g.n_points() << " time=" << format_double(field.time) << '\n';
  out << "x,up_re,up_im,down_re,down_im\n";
  for (int i = 0; i < g.n_points(); ++i) {
    out << format_double(g.x(i)) << ',' << format_double(field.up[i].real()) << ','
        << format_double(field.up[i].imag()) << ',' << format_double(field.down[i].real()) << ','
        << format_double(field.down[i].imag()) << '\n';
  }
}

SpinorField read_frame(std::istream& in) {
  std::string line;
  std::map<std::string, std::string> meta;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) break;
    if (line == "# bohm-frame v1") {
      saw_magic = true;
      continue;
    }
    std::istringstream fields(line.substr(2));
    std::string kv;
    while (fields >> kv) {
      const auto eq = kv.find('=');
      if (eq != std::string::npos) meta[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  if (!saw_magic) throw std::runtime_error("read_frame: missing '# bohm-frame v1' header");
  for (const char* key : {"x_min", "x_max", "n_points", "time"})
    if (!meta.count(key)) throw std::runtime_error(std::string("read_frame: header lacks ") + key);
  if (line != "x,up_re,up_im,down_re,down_im") throw std::runtime_error("read_frame: bad column header");

  const Grid1D grid(parse_double(meta["x_min"]), parse_double(meta["x_max"]), std::stoi(meta["n_points"]));
  SpinorField f(grid);
  f.time = parse_double(meta["time"]);
  for (int i = 0; i < grid.n_points(); ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("read_frame: truncated at row " + std::to_string(i));
    double v[5];
    std::size_t pos = 0;
    for (int c = 0; c < 5; ++c) {
      const auto comma = line.find(',', pos);
      const auto token = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      v[c] = parse_double(token);
      if (c < 4 && comma == std::string::npos) throw std::runtime_error("read_frame: short row " + std::to_string(i));
      pos = comma + 1;
    }
    f.up[i] = {v[1], v[2]};
    f.down[i] = {v[3], v[4]};
  }
  return f;
}

}  // namespace bohm
