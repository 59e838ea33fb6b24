#include "percept/dataset.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "percept/errors.hpp"

namespace percept {

namespace {

constexpr std::size_t kColumns = 10 + kSensorCount + 1;

std::string build_header() {
  std::string h = "index,v_left,v_right,x0,y0,x1,y1,dx,dy,yaw";
  char buf[8];
  for (int i = 0; i < kSensorCount; ++i) {
    std::snprintf(buf, sizeof(buf), ",ds_%02d", i);
    h += buf;
  }
  h += ",stuck";
  return h;
}

void render_row(const LogRecord& rec, std::string& out) {
  out += std::to_string(rec.index);
  for (double v : {rec.v_left, rec.v_right, rec.x0, rec.y0, rec.x1, rec.y1, rec.dx, rec.dy, rec.yaw}) {
    out += ',';
    out += format_g9(v);
  }
  for (double v : rec.ds) {
    out += ',';
    out += format_g9(v);
  }
  out += rec.stuck ? ",1" : ",0";
  out += '\n';
}

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw parse_error(line, "bad numeric field '" + field + "'");
  }
  if (!std::isfinite(v)) throw parse_error(line, "non-finite field '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  static std::atomic<unsigned> counter{0};
  auto name = path.filename().string() + ".tmp" + std::to_string(counter++);
  return path.parent_path() / name;
}

}  // namespace

Dataset::Dataset(std::vector<LogRecord> records, Provenance prov)
    : records_(std::move(records)), prov_(std::move(prov)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].index != i) {
      throw invalid_input("dataset indices must be contiguous from 0");
    }
  }
}

Subset Subset::all(const Dataset& d) {
  Subset s;
  s.data = &d;
  s.rows.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.rows[i] = i;
  return s;
}

std::string log_header() {
  static const std::string header = build_header();
  return header;
}

std::string format_g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

CsvLogWriter::CsvLogWriter(const std::filesystem::path& path, Mode mode) : path_(path) {
  const auto flags = mode == Mode::append ? std::ios::out | std::ios::app : std::ios::out | std::ios::trunc;
  out_.open(path, flags);
  if (!out_) throw io_error("cannot open log for writing: " + path.string());
  if (mode == Mode::fresh) {
    out_ << log_header() << '\n';
    if (!out_) throw io_error("write failure on " + path_.string());
  }
}

void CsvLogWriter::append(const LogRecord& rec) {
  std::string row;
  render_row(rec, row);
  out_ << row;
  if (!out_) throw io_error("write failure on " + path_.string());
}

void CsvLogWriter::flush() {
  out_.flush();
  if (!out_) throw io_error("flush failure on " + path_.string());
}

void write_log(const Dataset& dataset, const std::filesystem::path& path) {
  const auto tmp = temp_sibling(path);
  {
    std::ofstream out(tmp, std::ios::out | std::ios::trunc);
    if (!out) throw io_error("cannot open log for writing: " + tmp.string());
    out << log_header() << '\n';
    std::string row;
    for (const LogRecord& rec : dataset.records()) {
      row.clear();
      render_row(rec, row);
      out << row;
    }
    out.flush();
    if (!out) throw io_error("write failure on " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Dataset read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open log: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw parse_error(1, "missing header");
  if (line == log_header() + "\r") line.pop_back();
  if (line != log_header()) throw parse_error(1, "unexpected header");

  std::vector<LogRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != kColumns) {
      throw parse_error(line_no, "expected " + std::to_string(kColumns) + " columns, got " +
                                     std::to_string(fields.size()));
    }
    LogRecord rec;
    std::uint64_t idx = 0;
    {
      const auto& f = fields[0];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), idx);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw parse_error(line_no, "bad index field '" + f + "'");
      }
    }
    rec.index = idx;
    rec.v_left = parse_double(fields[1], line_no);
    rec.v_right = parse_double(fields[2], line_no);
    rec.x0 = parse_double(fields[3], line_no);
    rec.y0 = parse_double(fields[4], line_no);
    rec.x1 = parse_double(fields[5], line_no);
    rec.y1 = parse_double(fields[6], line_no);
    rec.dx = parse_double(fields[7], line_no);
    rec.dy = parse_double(fields[8], line_no);
    rec.yaw = parse_double(fields[9], line_no);
    for (int s = 0; s < kSensorCount; ++s) {
      rec.ds[s] = parse_double(fields[10 + s], line_no);
    }
    const auto& stuck = fields[kColumns - 1];
    if (stuck == "0") {
      rec.stuck = false;
    } else if (stuck == "1") {
      rec.stuck = true;
    } else {
      throw parse_error(line_no, "stuck flag must be 0 or 1, got '" + stuck + "'");
    }
    if (rec.index != records.size()) {
      throw parse_error(line_no, "index " + std::to_string(rec.index) + " out of order");
    }
    records.push_back(rec);
  }
  return Dataset(std::move(records));
}

Subset filter_by_yaw(const Subset& in, double center, double tolerance) {
  if (tolerance < 0.0) throw invalid_input("yaw tolerance must be >= 0");
  Subset out;
  out.data = in.data;
  for (std::size_t row : in.rows) {
    const double delta = wrap_angle((*in.data)[row].yaw - center);
    if (std::abs(delta) <= tolerance) out.rows.push_back(row);
  }
  return out;
}

Subset filter_by_yaw(const Dataset& dataset, double center, double tolerance) {
  return filter_by_yaw(Subset::all(dataset), center, tolerance);
}

NormalizedSensors normalize_sensors(const Subset& in) {
  if (in.size() == 0) throw invalid_input("normalize_sensors: empty input");
  NormalizedSensors norm;
  for (int c = 0; c < kSensorCount; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < in.size(); ++i) {
      lo = std::min(lo, in[i].ds[c]);
      hi = std::max(hi, in[i].ds[c]);
    }
    norm.range[c] = {lo, hi};
  }
  norm.values.resize(in.size(), Row(kSensorCount, 0.0));
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (int c = 0; c < kSensorCount; ++c) {
      const auto [lo, hi] = norm.range[c];
      norm.values[i][c] = hi > lo ? (in[i].ds[c] - lo) / (hi - lo) : 0.0;
    }
  }
  return norm;
}

NormalizedSensors normalize_sensors(const Dataset& dataset) {
  return normalize_sensors(Subset::all(dataset));
}

double denormalize(const NormalizedSensors& norm, std::size_t column, double v) {
  const auto [lo, hi] = norm.range[column];
  return lo + v * (hi - lo);
}

std::pair<int, int> cell_of(const GridSpec& grid, double x, double y) {
  if (grid.resolution < 1) throw invalid_input("grid resolution must be >= 1");
  if (!(grid.extent > 0.0)) throw invalid_input("grid extent must be positive");
  const double h = grid.extent / 2.0;
  if (std::abs(x) > h || std::abs(y) > h) {
    throw invalid_input("position outside arena");
  }
  auto index = [&](double v) {
    int i = static_cast<int>(std::floor((v + h) / grid.extent * grid.resolution));
    return std::min(std::max(i, 0), grid.resolution - 1);
  };
  return {index(y), index(x)};
}

Vec2 cell_center(const GridSpec& grid, int row, int col) {
  if (row < 0 || row >= grid.resolution || col < 0 || col >= grid.resolution) {
    throw invalid_input("cell out of range");
  }
  const double h = grid.extent / 2.0;
  const double step = grid.extent / grid.resolution;
  return {-h + (col + 0.5) * step, -h + (row + 0.5) * step};
}

OccupancyGrid occupancy_grid(const Subset& in, const GridSpec& grid) {
  OccupancyGrid occ;
  occ.grid = grid;
  occ.counts.assign(static_cast<std::size_t>(grid.resolution) * grid.resolution, 0);
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto [row, col] = cell_of(grid, in[i].x1, in[i].y1);
    ++occ.counts[static_cast<std::size_t>(row) * grid.resolution + col];
  }
  return occ;
}

OccupancyGrid occupancy_grid(const Dataset& dataset, const GridSpec& grid) {
  return occupancy_grid(Subset::all(dataset), grid);
}

}  // namespace percept
