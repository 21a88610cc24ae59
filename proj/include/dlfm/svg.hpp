#pragma once

#include <span>
#include <string>
#include <vector>

#include "dlfm/landscape.hpp"

namespace dlfm::svg {

/// One polyline per level through its critical pairs.
std::string landscape_plot(const Landscape& l, const std::string& title = "landscape");

/// 2-d scatter of `xy` (n x 2, row-major), one colour per label.
std::string scatter_plot(std::span<const double> xy, std::span<const int> labels,
                         const std::vector<std::string>& class_names, const std::string& title,
                         const std::string& x_label = "PC1", const std::string& y_label = "PC2");

/// Histogram of a null distribution with the observed statistic marked.
std::string histogram_plot(std::span<const double> null_values, double observed,
                           const std::string& title, std::size_t bins = 30);

}  // namespace dlfm::svg
