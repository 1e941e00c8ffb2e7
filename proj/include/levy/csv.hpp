#pragma once

#include "levy/grid.hpp"
#include "levy/sampling.hpp"
#include "levy/selection.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace levy {

//! Shortest decimal text that parses back to the same double.
std::string format_double(double x);

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/*!
 * Comma separated output with a header row. Optional `# key=value` lines
 * before the header carry the configuration that produced the file.
 * Errors are thrown as Error(io) naming the path.
 */
class CsvWriter
{
public:
  CsvWriter(const std::filesystem::path& path,
            std::initializer_list<std::string> columns,
            const ConfigEcho& echo = {});

  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(unsigned long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(std::size_t x) { return cell(static_cast<unsigned long long>(x)); }
  void end_row();
  //! Flushes and checks the stream.
  void close();

private:
  void check();

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t pending_ = 0;
};

//! index,t,delta with t_0 = 0 at index 0.
void write_scheme_csv(const std::filesystem::path& path, const SamplingScheme& scheme, const ConfigEcho& echo = {});
//! u,re,im over the mirrored full grid.
void write_spectrum_csv(const std::filesystem::path& path,
                        const SpectralGrid& grid,
                        std::span<const cdouble> half,
                        Symmetry sym,
                        const ConfigEcho& echo = {});
//! x,value
void write_estimate_csv(const std::filesystem::path& path,
                        std::span<const double> xs,
                        std::span<const double> values,
                        const ConfigEcho& echo = {});
//! m,loss
void write_loss_csv(const std::filesystem::path& path, const CvResult& cv, const ConfigEcho& echo = {});

struct RateRow
{
  double horizon;
  double delta_max;
  double h_star;
  double rate_proxy;
};
//! T,delta_max,h_star,rate_proxy
void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows, const ConfigEcho& echo = {});

//! Rows of a file written by CsvWriter: comment lines dropped, header first.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

} // namespace levy
