#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "ecmlfd/dataset.hpp"
#include "ecmlfd/errors.hpp"

namespace ecmlfd {

namespace {

constexpr std::size_t kNumericColumns = 83;
constexpr const char* kFlagColumn = "camera_moving";

void add_rotation(std::vector<std::string>& cols, const std::string& prefix) {
  for (int r = 1; r <= 3; ++r) {
    for (int c = 1; c <= 3; ++c) cols.push_back(prefix + "_r" + std::to_string(r) + std::to_string(c));
  }
}

void add_position(std::vector<std::string>& cols, const std::string& prefix) {
  for (const char* axis : {"_x", "_y", "_z"}) cols.push_back(prefix + axis);
}

void add_joints(std::vector<std::string>& cols, const std::string& prefix, int n, bool jaw) {
  const int plain = jaw ? n - 1 : n;
  for (int i = 1; i <= plain; ++i) cols.push_back(prefix + "_j" + std::to_string(i));
  if (jaw) cols.push_back(prefix + "_jaw");
}

std::vector<std::string> build_columns() {
  std::vector<std::string> cols{"timestamp"};
  add_joints(cols, "mtm", 8, true);
  add_position(cols, "mtm");
  add_rotation(cols, "mtm");
  add_joints(cols, "ecm", 4, false);
  add_joints(cols, "psm1", 7, true);
  add_joints(cols, "psm3", 7, true);
  add_position(cols, "psm1");
  add_rotation(cols, "psm1");
  add_position(cols, "psm3");
  add_rotation(cols, "psm3");
  add_position(cols, "ecm");
  add_rotation(cols, "ecm");
  for (const char* g : {"lpog_x", "lpog_y", "rpog_x", "rpog_y", "bpog_x", "bpog_y"}) cols.push_back(g);
  cols.push_back("pupil_left");
  cols.push_back("pupil_right");
  cols.push_back(kFlagColumn);
  return cols;
}

using Flat = std::array<double, kNumericColumns>;

class FlatWriter {
 public:
  explicit FlatWriter(Flat& f) : f_(f) {}
  void put(double v) { f_[i_++] = v; }
  template <std::size_t N>
  void put(const std::array<double, N>& a) {
    for (double v : a) put(v);
  }
  void put(const Vec3& v) {
    for (int i = 0; i < 3; ++i) put(v(i));
  }
  void put(const Rotation3& r) { put(r.row_major()); }

 private:
  Flat& f_;
  std::size_t i_ = 0;
};

class FlatReader {
 public:
  FlatReader(const Flat& f, std::size_t row) : f_(f), row_(row) {}
  double take() { return f_[i_++]; }
  template <std::size_t N>
  void take(std::array<double, N>& a) {
    for (double& v : a) v = take();
  }
  void take(Vec3& v) {
    for (int i = 0; i < 3; ++i) v(i) = take();
  }
  void take(Rotation3& r) {
    const std::size_t first = i_;
    std::array<double, 9> m{};
    take(m);
    try {
      r = Rotation3::from_row_major(m);
    } catch (const std::invalid_argument& e) {
      throw DataError("row " + std::to_string(row_) + ", column " + pool_columns()[first] + ": " +
                      e.what());
    }
  }

 private:
  const Flat& f_;
  std::size_t row_;
  std::size_t i_ = 0;
};

Flat flatten(const DataRecord& r) {
  Flat f{};
  FlatWriter w(f);
  w.put(r.timestamp);
  w.put(r.mtm_joints);
  w.put(r.mtm_pos);
  w.put(r.mtm_rot);
  w.put(r.ecm_joints);
  w.put(r.psm1_joints);
  w.put(r.psm3_joints);
  w.put(r.psm1_pos);
  w.put(r.psm1_rot);
  w.put(r.psm3_pos);
  w.put(r.psm3_rot);
  w.put(r.ecm_pos);
  w.put(r.ecm_rot);
  w.put(r.gaze);
  w.put(r.pupil_diameters);
  return f;
}

DataRecord unflatten(const Flat& f, std::size_t row) {
  DataRecord r;
  FlatReader rd(f, row);
  r.timestamp = rd.take();
  rd.take(r.mtm_joints);
  rd.take(r.mtm_pos);
  rd.take(r.mtm_rot);
  rd.take(r.ecm_joints);
  rd.take(r.psm1_joints);
  rd.take(r.psm3_joints);
  rd.take(r.psm1_pos);
  rd.take(r.psm1_rot);
  rd.take(r.psm3_pos);
  rd.take(r.psm3_rot);
  rd.take(r.ecm_pos);
  rd.take(r.ecm_rot);
  rd.take(r.gaze);
  rd.take(r.pupil_diameters);
  return r;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

const std::vector<std::string>& pool_columns() {
  static const std::vector<std::string> cols = build_columns();
  return cols;
}

void write_pool(const DataPool& pool, std::ostream& out) {
  if (!pool.provenance.empty()) {
    std::size_t start = 0;
    while (start <= pool.provenance.size()) {
      const std::size_t nl = pool.provenance.find('\n', start);
      const std::size_t end = nl == std::string::npos ? pool.provenance.size() : nl;
      out << "# " << std::string_view(pool.provenance).substr(start, end - start) << '\n';
      if (nl == std::string::npos) break;
      start = nl + 1;
    }
  }
  const auto& cols = pool_columns();
  const std::size_t ncols = pool.has_camera_moving ? cols.size() : kNumericColumns;
  for (std::size_t i = 0; i < ncols; ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  char buf[32];
  for (const DataRecord& r : pool.records) {
    const Flat f = flatten(r);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", f[i]);
      if (i) out << ',';
      out << buf;
    }
    if (pool.has_camera_moving) out << ',' << (r.camera_moving ? '1' : '0');
    out << '\n';
  }
}

void write_pool(const DataPool& pool, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_pool(pool, out);
  if (!out) throw DataError("failed writing " + path.string());
}

DataPool read_pool(std::istream& in) {
  DataPool pool;
  std::string line;
  bool have_header = false;
  bool have_provenance = false;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.rfind("# ", 0) == 0 || line == "#") {
      if (have_provenance) pool.provenance += '\n';
      pool.provenance += line.size() > 2 ? line.substr(2) : std::string();
      have_provenance = true;
      continue;
    }
    have_header = true;
    break;
  }
  if (!have_header) throw DataError("pool file has no header row");

  const auto& cols = pool_columns();
  const auto header = split_csv(line);
  for (std::size_t i = 0; i < header.size() && i < cols.size(); ++i) {
    if (header[i] != cols[i]) {
      throw DataError("pool header: expected column '" + cols[i] + "' at position " +
                      std::to_string(i) + ", found '" + std::string(header[i]) + "'");
    }
  }
  if (header.size() < kNumericColumns) {
    throw DataError("pool header: missing column '" + cols[header.size()] + "'");
  }
  if (header.size() > cols.size()) {
    throw DataError("pool header: unexpected column '" + std::string(header[cols.size()]) + "'");
  }
  pool.has_camera_moving = header.size() == cols.size();

  std::size_t row = 0;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                      " cells, found " + std::to_string(cells.size()));
    }
    Flat f{};
    for (std::size_t i = 0; i < kNumericColumns; ++i) {
      const std::string_view cell = cells[i];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v)) {
        throw DataError("row " + std::to_string(row) + ", column " + cols[i] +
                        ": non-numeric cell '" + std::string(cell) + "'");
      }
      f[i] = v;
    }
    DataRecord rec = unflatten(f, row);
    if (pool.has_camera_moving) {
      const std::string_view flag = cells[kNumericColumns];
      if (flag == "1" || flag == "true") {
        rec.camera_moving = true;
      } else if (flag == "0" || flag == "false") {
        rec.camera_moving = false;
      } else {
        throw DataError("row " + std::to_string(row) + ", column camera_moving: expected 0 or 1, found '" +
                        std::string(flag) + "'");
      }
    }
    pool.records.push_back(std::move(rec));
    ++row;
  }
  check_sorted(pool);
  return pool;
}

DataPool read_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open pool file " + path.string());
  return read_pool(in);
}

}  // namespace ecmlfd
