#include "rbk/runner.hpp"

#include <fstream>

#include <fmt/format.h>

#include "rbk/csv.hpp"
#include "rbk/envelope.hpp"
#include "rbk/error.hpp"
#include "rbk/ma.hpp"

namespace rbk {

namespace {

std::vector<std::string> coordinate_header(int dim) {
  return dim == 1 ? std::vector<std::string>{"t"} : std::vector<std::string>{"t0", "t1"};
}

void push_coords(std::vector<double>& row, const Point& t, int dim) {
  row.push_back(t[0]);
  if (dim == 2) row.push_back(t[1]);
}

std::vector<std::pair<std::string, std::string>> report_pairs(const Scenario& s, const VolumeReport& r) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("scenario", s.id);
  kv.emplace_back("polytope", s.polytope.describe());
  kv.emplace_back("subvariety", to_string(s.subvariety.kind));
  kv.emplace_back("p", std::to_string(r.p));
  kv.emplace_back("n_per_axis", std::to_string(s.grid.n_per_axis));
  kv.emplace_back("T", format_double(s.grid.halfwidth));
  for (const auto& d : r.dims) {
    kv.emplace_back(fmt::format("ambient_dim_m{}", d.m), std::to_string(d.ambient_dim));
    kv.emplace_back(fmt::format("image_dim_m{}", d.m), std::to_string(d.image_dim));
  }
  kv.emplace_back("vol_from_dims", volume_string(r.vol_from_dims));
  kv.emplace_back("vol_from_dims_exact", r.vol_from_dims.exact ? "true" : "false");
  kv.emplace_back("vol_from_ma_restricted", format_double(r.vol_from_ma_restricted));
  kv.emplace_back("vol_from_ma_ambient_pullback", format_double(r.vol_from_ma_ambient_pullback));
  for (const auto& mv : r.moving) kv.emplace_back(fmt::format("moving_m{}", mv.m), format_double(mv.mass));
  kv.emplace_back("fitted_C", format_double(r.fundamental.fitted_c));
  kv.emplace_back("fitted_C_argmax_m", std::to_string(r.fundamental.argmax_m));
  kv.emplace_back("gap_dims_restricted", format_double(r.gap_dims_restricted));
  kv.emplace_back("gap_dims_ambient", format_double(r.gap_dims_ambient));
  kv.emplace_back("gap_restricted_ambient", format_double(r.gap_restricted_ambient));
  kv.emplace_back("three_way_agreement", r.three_way_agreement ? "true" : "false");
  return kv;
}

}  // namespace

std::string volume_string(const VolumeFit& fit) {
  if (!fit.exact) return format_double(fit.value);
  if (fit.exact->denominator() == 1) return std::to_string(fit.exact->numerator());
  return fmt::format("{}/{}", fit.exact->numerator(), fit.exact->denominator());
}

std::string report_text(const Scenario& scenario, const VolumeReport& report) {
  std::string out;
  for (const auto& [k, v] : report_pairs(scenario, report)) out += k + "=" + v + "\n";
  return out;
}

void prepare_out_dir(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    throw Error(ErrorCode::IoOutDir, fmt::format("cannot create output directory {}", out_dir.string()));
  const std::filesystem::path probe = out_dir / ".rbk_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw Error(ErrorCode::IoOutDir, fmt::format("output directory {} is not writable", out_dir.string()));
  }
  std::filesystem::remove(probe, ec);
}

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  prepare_out_dir(out_dir);
  const Model model = s.model();
  RunResult result;
  std::vector<KernelGrid> kernels;
  result.report = assemble_report(s.id, model, s.m_list, &kernels);

  const LogGrid& zg = model.z_grid();
  const int dim = zg.dim;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    write_atomic(path, content);
    result.written.push_back(path);
  };

  if (s.wants("kernel")) {
    std::vector<std::string> header{"m"};
    for (auto& h : coordinate_header(dim)) header.push_back(h);
    header.push_back("B");
    CsvTable t(header);
    for (const KernelGrid& k : kernels)
      for (std::size_t i = 0; i < zg.size(); ++i) {
        std::vector<std::string> row{std::to_string(k.m)};
        const Point p = zg.point(i);
        row.push_back(format_double(p[0]));
        if (dim == 2) row.push_back(format_double(p[1]));
        row.push_back(format_double(k.values[i]));
        t.add_row(std::move(row));
      }
    emit("kernel.csv", t.str());
  }

  if (s.wants("envelope") || s.wants("ma")) {
    const EnvelopeGrid env = equilibrium_envelope(model, true);
    if (s.wants("envelope")) {
      const ContactSet cs = contact_set(env);
      std::vector<std::string> header = coordinate_header(dim);
      for (const char* h : {"u", "P", "contact"}) header.emplace_back(h);
      CsvTable t(header);
      for (std::size_t i = 0; i < zg.size(); ++i) {
        std::vector<double> row;
        push_coords(row, zg.point(i), dim);
        row.push_back(env.samples[i]);
        row.push_back(env.values[i]);
        row.push_back(cs.mask[i] ? 1.0 : 0.0);
        t.add_row(row);
      }
      emit("envelope.csv", t.str());
    }
    if (s.wants("ma")) {
      const DiscreteMeasure ma = monge_ampere(env);
      std::vector<std::string> header = coordinate_header(dim);
      header.emplace_back("mass");
      CsvTable t(header);
      for (std::size_t i = 0; i < zg.size(); ++i) {
        std::vector<double> row;
        push_coords(row, zg.point(i), dim);
        row.push_back(ma.masses[i]);
        t.add_row(row);
      }
      emit("ma.csv", t.str());
    }
  }

  if (s.wants("volume_report")) {
    CsvTable t({"key", "value"});
    for (auto& [k, v] : report_pairs(s, result.report)) t.add_row({k, v});
    emit("volume_report.csv", t.str());
  }
  if (s.wants("report")) emit("report.txt", report_text(s, result.report));
  return result;
}

}  // namespace rbk
