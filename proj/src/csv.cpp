#include "levy/csv.hpp"

#include "levy/error.hpp"

#include <charconv>
#include <sstream>

namespace levy {

std::string format_double(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string> columns,
                     const ConfigEcho& echo)
  : path_(path)
  , out_(path, std::ios::binary | std::ios::trunc)
  , columns_(columns.size())
{
  if (!out_)
    throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  for (const auto& [key, value] : echo)
    out_ << "# " << key << '=' << value << '\n';
  bool first = true;
  for (const auto& c : columns) {
    out_ << (first ? "" : ",") << c;
    first = false;
  }
  out_ << '\n';
  check();
}

CsvWriter& CsvWriter::cell(const std::string& text)
{
  if (pending_ > 0)
    out_ << ',';
  if (text.find_first_of(",\"\n") != std::string::npos) {
    out_ << '"';
    for (char c : text)
      out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  } else {
    out_ << text;
  }
  ++pending_;
  return *this;
}

CsvWriter& CsvWriter::cell(double x)
{
  return cell(format_double(x));
}

CsvWriter& CsvWriter::cell(long long x)
{
  return cell(std::to_string(x));
}

CsvWriter& CsvWriter::cell(unsigned long long x)
{
  return cell(std::to_string(x));
}

void CsvWriter::end_row()
{
  if (pending_ != columns_)
    throw Error(ErrorCode::length_mismatch,
                path_.string() + ": row has " + std::to_string(pending_) + " cells, header " +
                  std::to_string(columns_));
  out_ << '\n';
  pending_ = 0;
  check();
}

void CsvWriter::close()
{
  out_.flush();
  check();
  out_.close();
}

void CsvWriter::check()
{
  if (!out_)
    throw Error(ErrorCode::io, "write failed on " + path_.string());
}

void write_scheme_csv(const std::filesystem::path& path, const SamplingScheme& scheme, const ConfigEcho& echo)
{
  CsvWriter w(path, {"index", "t", "delta"}, echo);
  const auto times = scheme.times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    w.cell(i).cell(times[i]);
    w.cell(i == 0 ? 0.0 : scheme.delta(i - 1));
    w.end_row();
  }
  w.close();
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const SpectralGrid& grid,
                        std::span<const cdouble> half,
                        Symmetry sym,
                        const ConfigEcho& echo)
{
  const auto full = mirror(half, sym);
  CsvWriter w(path, {"u", "re", "im"}, echo);
  for (std::size_t i = 0; i < full.size(); ++i) {
    w.cell(grid.full_node(i)).cell(full[i].real()).cell(full[i].imag());
    w.end_row();
  }
  w.close();
}

void write_estimate_csv(const std::filesystem::path& path,
                        std::span<const double> xs,
                        std::span<const double> values,
                        const ConfigEcho& echo)
{
  if (xs.size() != values.size())
    throw Error(ErrorCode::length_mismatch, "estimate values do not match the spatial grid");
  CsvWriter w(path, {"x", "value"}, echo);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    w.cell(xs[i]).cell(values[i]);
    w.end_row();
  }
  w.close();
}

void write_loss_csv(const std::filesystem::path& path, const CvResult& cv, const ConfigEcho& echo)
{
  CsvWriter w(path, {"m", "loss"}, echo);
  for (std::size_t i = 0; i < cv.menu.size(); ++i) {
    w.cell(cv.menu[i]).cell(cv.loss[i]);
    w.end_row();
  }
  w.close();
}

void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows, const ConfigEcho& echo)
{
  CsvWriter w(path, {"T", "delta_max", "h_star", "rate_proxy"}, echo);
  for (const auto& r : rows) {
    w.cell(r.horizon).cell(r.delta_max).cell(r.h_star).cell(r.rate_proxy);
    w.end_row();
  }
  w.close();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    row.push_back(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace levy
