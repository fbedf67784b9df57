#include "roadseg/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "roadseg/evalcost.hpp"

namespace roadseg {
namespace {

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(const std::vector<Image>& images,
                                const std::vector<SaliencyMap>& saliency,
                                const std::vector<SegmentationMask>& gt, const SweepGrid& grid,
                                const SuperpixelConfig& sp_base, OverlapDenominator denominator,
                                MiouMode mode) {
  grid.validate();
  if (images.size() != saliency.size() || images.size() != gt.size() || images.empty())
    throw std::invalid_argument("run_sweep: images, saliency and ground truth must align");

  std::vector<SweepRow> rows;
  for (double k : grid.k) {
    // Segmentation dominates the runtime; share it across the cells for
    // this k.
    SuperpixelConfig spcfg = sp_base;
    spcfg.k = k;
    std::vector<SuperpixelMap> sps;
    sps.reserve(images.size());
    for (const Image& img : images) sps.push_back(segment(img, spcfg));

    for (std::size_t t = 0; t < grid.tau.size(); ++t) {
      SweepRow row;
      row.k = k;
      row.tau = grid.tau[t];
      row.theta = grid.theta[t];
      row.n_images = static_cast<int>(images.size());
      try {
        FusionConfig fcfg;
        fcfg.tau = row.tau;
        fcfg.theta = row.theta;
        fcfg.denominator = denominator;
        fcfg.validate();
        std::vector<IouCounts> counts(images.size());
        for (std::size_t i = 0; i < images.size(); ++i) {
          const FuseResult fr = fuse(sps[i], salient_area(saliency[i], fcfg.tau), fcfg);
          row.warnings += fr.empty_salient ? 1 : 0;
          counts[i] = iou_counts(fr.mask, gt[i]);
        }
        row.miou = miou(counts, mode);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }

  // Table-style presentation: best configuration first. Parameter order
  // breaks ties so the output is deterministic.
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.error.empty() != b.error.empty()) return a.error.empty();
    if (a.miou != b.miou) return a.miou > b.miou;
    if (a.k != b.k) return a.k < b.k;
    if (a.tau != b.tau) return a.tau < b.tau;
    return a.theta < b.theta;
  });
  return rows;
}

std::string sweep_csv_string(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "k,tau,theta,miou,n_images,warnings\n";
  for (const SweepRow& row : rows) {
    out << format_param(row.k) << ',' << format_param(row.tau) << ',' << format_param(row.theta)
        << ',';
    if (row.error.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", row.miou);
      out << buf;
    } else {
      out << "ERROR";
    }
    out << ',' << row.n_images << ',' << row.warnings << '\n';
  }
  return out.str();
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << sweep_csv_string(rows);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace roadseg
