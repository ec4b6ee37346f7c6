#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hoseeg/hos.hpp"
#include "hoseeg/ingest.hpp"

namespace hoseeg {

struct Electrode {
  std::string name;
  double x = 0.0;  // nose up, unit-disk projection
  double y = 0.0;
};

struct TopoLayout {
  std::vector<Electrode> electrodes;
};

/// Fz, C3, Cz, C4, Pz, PO7, Oz, PO8 on an azimuthal projection of the 10-20 system.
TopoLayout default_layout();

/// Throws ConfigError for duplicate names or positions outside the unit disk.
void validate(const TopoLayout& layout);

enum class TopoQuantity { magnitude, phase };

/// Inverse-distance (power 2) interpolation; exact at electrode positions.
double idw(const TopoLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& values, double x, double y);

/// IDW of unit phasors, returning an angle in (-pi, pi].
double idw_phase(const TopoLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& phases, double x, double y);

inline constexpr int kTopoGrid = 64;

struct TopoOptions {
  double f_hz = 14.0;
  std::vector<double> t_centers_s{2.0, 4.0};
  double window_s = 1.0;
  SegmentPlan plan{};
};

/// Per-channel diagonal bispectrum B(k, k), k the bin nearest f, of the
/// window_s window centred at t_center (single zero-padded segment). With
/// several epochs the complex values are averaged for phase maps and the
/// magnitudes averaged for magnitude maps.
Eigen::VectorXcd diagonal_bispectrum(const Epoch& epoch, double fs_hz, double t_center_s, const TopoOptions& options);
Eigen::VectorXd channel_scalars(const EpochSet& set, const TopoLayout& layout, double t_center_s,
                                TopoQuantity quantity, const TopoOptions& options);

struct TopoMap {
  TopoQuantity quantity = TopoQuantity::magnitude;
  double t_center_s = 0.0;
  Eigen::VectorXd channel_values;  // layout order
  Eigen::MatrixXd grid;            // kTopoGrid x kTopoGrid, row 0 at the top; NaN outside the head
  std::string svg;
  std::string csv;                 // x,y,value for cells inside the head
};

TopoMap render_topomap(const TopoLayout& layout, const Eigen::Ref<const Eigen::VectorXd>& values,
                       TopoQuantity quantity, double t_center_s, const std::string& title);

/// One map per time centre.
std::vector<TopoMap> topomap(const EpochSet& set, const TopoLayout& layout, TopoQuantity quantity,
                             const TopoOptions& options = {});

std::string to_string(TopoQuantity q);

}  // namespace hoseeg
