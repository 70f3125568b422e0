#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace elegy::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = true;  // false: line only
  bool line = true;     // false: markers only
};

struct Band {
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Line/scatter chart with optional shaded bands drawn beneath the series.
std::string line_chart(const Axes& axes, const std::vector<Series>& series, const std::vector<Band>& bands = {});

/// Square heatmap with cell values printed; rows and columns share `labels`.
std::string heatmap(const std::string& title, const std::vector<std::string>& labels, const Eigen::MatrixXd& values);

struct Point {
  double x = 0.0;
  double y = 0.0;
  std::string label;
  std::string group;  // glyph and colour are chosen per distinct group
};

struct Link {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;  // stroke width scales with weight
};

/// Scatter of labelled points, optionally joined by weighted links.
std::string scatter(const std::string& title, const std::vector<Point>& points, const std::vector<Link>& links = {});

std::string escape(const std::string& text);

}  // namespace elegy::svg
