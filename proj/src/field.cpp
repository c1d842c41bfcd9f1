#include "diracl2/field.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace diracl2 {

CliffordField::CliffordField(Grid grid)
    : grid_(std::move(grid)),
      values_(Eigen::MatrixXd::Zero(Index(1) << grid_.n(),
                                    grid_.num_nodes())) {}

void CliffordField::require_finite(const char* what) const {
  if (!all_finite())
    throw numeric_error(std::string(what) +
                        ": field contains non-finite samples");
}

void CliffordField::require_same_grid(const CliffordField& o,
                                      const char* what) const {
  if (!grid_.same_layout(o.grid_))
    throw dimension_error(std::string(what) +
                          ": fields live on different grids");
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr char kBinaryMagic[8] = {'D', 'L', '2', 'F', 'L', 'D', '0', '1'};

void write_exact(std::ofstream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data),
            static_cast<std::streamsize>(bytes));
}

void read_exact(std::ifstream& in, void* data, std::size_t bytes) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes)
    throw config_error("field snapshot truncated");
}

Grid read_header_values(int n, const std::vector<Index>& extents,
                        const std::vector<double>& lows,
                        const std::vector<double>& highs) {
  Eigen::VectorXd lo(n + 1), hi(n + 1);
  for (int a = 0; a <= n; ++a) {
    lo[a] = lows[static_cast<std::size_t>(a)];
    hi[a] = highs[static_cast<std::size_t>(a)];
  }
  return Grid(n, extents, lo, hi);
}

}  // namespace

void CliffordField::save_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "cannot open '" + path + "' for writing");
  write_exact(out, kBinaryMagic, sizeof kBinaryMagic);
  const std::int64_t n = grid_.n();
  write_exact(out, &n, sizeof n);
  for (int a = 0; a <= grid_.n(); ++a) {
    const std::int64_t e = grid_.extent(a);
    write_exact(out, &e, sizeof e);
  }
  for (int a = 0; a <= grid_.n(); ++a) {
    const double lo = grid_.low(a);
    write_exact(out, &lo, sizeof lo);
  }
  for (int a = 0; a <= grid_.n(); ++a) {
    const double hi = grid_.high(a);
    write_exact(out, &hi, sizeof hi);
  }
  // Column-major equals node-major/blade-minor, so one block write suffices.
  write_exact(out, values_.data(),
              sizeof(double) * static_cast<std::size_t>(values_.size()));
  require(out.good(), "write to '" + path + "' failed");
}

CliffordField CliffordField::load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open '" + path + "'");
  char magic[8];
  read_exact(in, magic, sizeof magic);
  require(std::memcmp(magic, kBinaryMagic, sizeof magic) == 0,
          "'" + path + "' is not a field snapshot");
  std::int64_t n = 0;
  read_exact(in, &n, sizeof n);
  require(n >= 1 && n <= kMaxAlgebraN, "snapshot has bad n");
  std::vector<Index> extents(static_cast<std::size_t>(n + 1));
  for (auto& e : extents) read_exact(in, &e, sizeof e);
  std::vector<double> lows(static_cast<std::size_t>(n + 1));
  std::vector<double> highs(static_cast<std::size_t>(n + 1));
  for (auto& v : lows) read_exact(in, &v, sizeof v);
  for (auto& v : highs) read_exact(in, &v, sizeof v);
  CliffordField field(
      read_header_values(static_cast<int>(n), extents, lows, highs));
  read_exact(in, field.values_.data(),
             sizeof(double) * static_cast<std::size_t>(field.values_.size()));
  return field;
}

void CliffordField::save_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), "cannot open '" + path + "' for writing");
  out << "n," << grid_.n() << "\n";
  out << "extents";
  for (int a = 0; a <= grid_.n(); ++a) out << ',' << grid_.extent(a);
  out << "\nlows";
  for (int a = 0; a <= grid_.n(); ++a) out << ',' << format_double(grid_.low(a));
  out << "\nhighs";
  for (int a = 0; a <= grid_.n(); ++a)
    out << ',' << format_double(grid_.high(a));
  out << "\n";
  // One node per row, blade coefficients with masks ascending.
  for (Index k = 0; k < grid_.num_nodes(); ++k) {
    for (Index c = 0; c < components(); ++c) {
      if (c > 0) out << ',';
      out << format_double(values_(c, k));
    }
    out << "\n";
  }
  require(out.good(), "write to '" + path + "' failed");
}

CliffordField CliffordField::load_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path + "'");
  auto next_line = [&in, &path]() {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)),
            "'" + path + "': truncated snapshot");
    return line;
  };
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };

  auto nCells = split(next_line());
  require(nCells.size() == 2 && nCells[0] == "n", "'" + path + "': bad header");
  const int n = std::stoi(nCells[1]);
  require(n >= 1 && n <= kMaxAlgebraN, "snapshot has bad n");

  auto extentCells = split(next_line());
  require(extentCells.size() == static_cast<std::size_t>(n + 2) &&
              extentCells[0] == "extents",
          "'" + path + "': bad extents row");
  std::vector<Index> extents;
  for (int a = 1; a <= n + 1; ++a)
    extents.push_back(std::stoll(extentCells[static_cast<std::size_t>(a)]));

  auto read_axis_row = [&](const char* label) {
    auto cells = split(next_line());
    require(cells.size() == static_cast<std::size_t>(n + 2) &&
                cells[0] == label,
            "'" + path + "': bad axis row");
    std::vector<double> vals;
    for (int a = 1; a <= n + 1; ++a)
      vals.push_back(std::stod(cells[static_cast<std::size_t>(a)]));
    return vals;
  };
  const auto lows = read_axis_row("lows");
  const auto highs = read_axis_row("highs");

  CliffordField field(read_header_values(n, extents, lows, highs));
  for (Index k = 0; k < field.grid().num_nodes(); ++k) {
    auto cells = split(next_line());
    require(cells.size() == static_cast<std::size_t>(field.components()),
            "'" + path + "': bad sample row");
    for (Index c = 0; c < field.components(); ++c)
      field.values_(c, k) = std::stod(cells[static_cast<std::size_t>(c)]);
  }
  return field;
}

}  // namespace diracl2
