#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "roadseg/evalcost.hpp"
#include "roadseg/fusion.hpp"
#include "roadseg/superpixel.hpp"
#include "roadseg/types.hpp"

namespace roadseg {

/// Parameter grid: every k is crossed with the paired (tau, theta) list.
struct SweepGrid {
  std::vector<double> k;
  std::vector<double> tau;    // paired with theta by position
  std::vector<double> theta;

  void validate() const {
    if (k.empty() || tau.empty()) throw std::invalid_argument("SweepGrid: grid must be non-empty");
    if (tau.size() != theta.size())
      throw std::invalid_argument("SweepGrid: tau and theta lists must pair up (equal length)");
  }
};

struct SweepRow {
  double k = 0.0;
  double tau = 0.0;
  double theta = 0.0;
  double miou = 0.0;
  int n_images = 0;
  int warnings = 0;    // images with an empty salient area
  std::string error;   // non-empty when the cell failed
};

/// Evaluates every grid cell over the corpus. Superpixels are computed
/// once per k and reused across the (tau, theta) pairs. Rows come back
/// sorted by mIOU descending (failed cells last); a failing cell is
/// recorded, not fatal.
std::vector<SweepRow> run_sweep(const std::vector<Image>& images,
                                const std::vector<SaliencyMap>& saliency,
                                const std::vector<SegmentationMask>& gt, const SweepGrid& grid,
                                const SuperpixelConfig& sp_base, OverlapDenominator denominator,
                                MiouMode mode = MiouMode::Dataset);

/// CSV with fixed columns: k,tau,theta,miou,n_images,warnings.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::string sweep_csv_string(const std::vector<SweepRow>& rows);

}  // namespace roadseg
