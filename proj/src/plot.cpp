#include "jamgcn/plot.hpp"

#include "jamgcn/error.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace jamgcn {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kPad = 40.0;

// Maps world meters to canvas pixels with y pointing up.
struct View {
  double min_x = 0.0, min_y = 0.0, scale = 1.0;

  double px(double x) const { return kPad + (x - min_x) * scale; }
  double py(double y) const { return kCanvas - kPad - (y - min_y) * scale; }
  double len(double d) const { return d * scale; }
};

struct Bounds {
  double lo_x = std::numeric_limits<double>::infinity();
  double lo_y = std::numeric_limits<double>::infinity();
  double hi_x = -std::numeric_limits<double>::infinity();
  double hi_y = -std::numeric_limits<double>::infinity();

  void add(double x, double y, double r = 0.0) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(r)) return;
    lo_x = std::min(lo_x, x - r);
    lo_y = std::min(lo_y, y - r);
    hi_x = std::max(hi_x, x + r);
    hi_y = std::max(hi_y, y + r);
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

Vec2 config_point(const nlohmann::json& cfg, const char* section, const char* key, Vec2 fallback) {
  if (!cfg.contains(section) || !cfg[section].contains(key)) return fallback;
  const auto& v = cfg[section][key];
  return Vec2(v.at(0).get<double>(), v.at(1).get<double>());
}

double config_number(const nlohmann::json& cfg, const char* section, const char* key, double fallback) {
  if (!cfg.contains(section) || !cfg[section].contains(key)) return fallback;
  return cfg[section][key].get<double>();
}

JammerEstimate truth_from_config(const nlohmann::json& cfg) {
  JammerEstimate e;
  e.xj = config_number(cfg, "jammer", "x", 0.0);
  e.yj = config_number(cfg, "jammer", "y", 0.0);
  e.a = config_number(cfg, "jammer", "a", 0.9);
  const double k = config_number(cfg, "jammer", "k", 1.0);
  const double p_tau = config_number(cfg, "jammer", "p_tau", 0.5);
  e.r_tau = p_tau < k ? std::log(p_tau / k) / std::log(e.a) : 0.0;
  return e;
}

std::vector<Vec2> start_positions(const nlohmann::json& cfg) {
  std::vector<Vec2> out;
  if (!cfg.contains("start_positions")) return out;
  for (const auto& p : cfg["start_positions"]) out.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return out;
}

// One view for every frame of a log so that panels are comparable.
View view_for(const TrajectoryLog& log) {
  Bounds b;
  const Vec2 target = config_point(log.config, "physics", "target", Vec2::Zero());
  const double arrive = config_number(log.config, "physics", "arrive_radius", 5.0);
  b.add(target.x(), target.y(), arrive);
  const JammerEstimate truth = truth_from_config(log.config);
  b.add(truth.xj, truth.yj, truth.r_tau);
  for (const Vec2& p : start_positions(log.config)) b.add(p.x(), p.y());
  for (const TickRecord& t : log.ticks)
    for (const UavState& u : t.uavs) b.add(u.pos.x(), u.pos.y());
  if (!std::isfinite(b.lo_x)) b = Bounds{0.0, 0.0, 1.0, 1.0};
  const double span = std::max({b.hi_x - b.lo_x, b.hi_y - b.lo_y, 1.0}) * 1.15;
  const double cx = 0.5 * (b.lo_x + b.hi_x);
  const double cy = 0.5 * (b.lo_y + b.hi_y);
  View v;
  v.scale = (kCanvas - 2.0 * kPad) / span;
  v.min_x = cx - 0.5 * span;
  v.min_y = cy - 0.5 * span;
  return v;
}

void circle(std::ostream& out, const char* cls, double cx, double cy, double r, const std::string& style) {
  out << "  <circle class=\"" << cls << "\" cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
      << "\" " << style << "/>\n";
}

}  // namespace

std::string render_scene_svg(const TrajectoryLog& log, const TickRecord* tick) {
  const View v = view_for(log);
  const JammerEstimate truth = tick ? tick->truth : truth_from_config(log.config);
  const double k = config_number(log.config, "jammer", "k", 1.0);
  const Vec2 target = config_point(log.config, "physics", "target", Vec2::Zero());
  const double arrive = config_number(log.config, "physics", "arrive_radius", 5.0);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
      << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"white\"/>\n";

  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    if (!(p < k)) continue;
    const double r = std::log(p / k) / std::log(truth.a);
    circle(out, svg_class::kContour, v.px(truth.xj), v.py(truth.yj), v.len(r),
           "fill=\"none\" stroke=\"black\" stroke-width=\"0.8\"");
  }
  circle(out, svg_class::kTrueDisk, v.px(truth.xj), v.py(truth.yj), v.len(truth.r_tau), "fill=\"black\"");
  if (tick)
    circle(out, svg_class::kPredicted, v.px(tick->predicted.xj), v.py(tick->predicted.yj),
           v.len(tick->predicted.r_tau), "fill=\"none\" stroke=\"red\" stroke-width=\"2\"");
  circle(out, svg_class::kTarget, v.px(target.x()), v.py(target.y()), v.len(arrive),
         "fill=\"none\" stroke=\"green\" stroke-width=\"2\"");

  std::vector<Vec2> positions;
  if (tick)
    for (const UavState& u : tick->uavs) positions.push_back(u.pos);
  else
    positions = start_positions(log.config);

  if (tick) {
    for (const auto& [a, b] : tick->edges) {
      const Vec2& pa = positions.at(static_cast<std::size_t>(a));
      const Vec2& pb = positions.at(static_cast<std::size_t>(b));
      out << "  <line class=\"" << svg_class::kLink << "\" x1=\"" << fmt(v.px(pa.x())) << "\" y1=\""
          << fmt(v.py(pa.y())) << "\" x2=\"" << fmt(v.px(pb.x())) << "\" y2=\"" << fmt(v.py(pb.y()))
          << "\" stroke=\"blue\" stroke-width=\"1.5\"/>\n";
    }
  }
  for (const Vec2& p : positions)
    circle(out, svg_class::kUav, v.px(p.x()), v.py(p.y()), 4.0, "fill=\"red\"");

  const double t = tick ? tick->t : 0.0;
  out << "  <text x=\"" << kPad << "\" y=\"" << kPad * 0.6 << "\" font-family=\"monospace\" font-size=\"16\">t = "
      << fmt(t) << " s</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<std::string> plot_trajectory(const TrajectoryLog& log, const std::string& out_dir,
                                         double snapshot_every) {
  if (!(snapshot_every > 0.0)) throw ConfigError("snapshot interval must be positive");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  const double dt = config_number(log.config, "physics", "dt", 0.1);
  const long every = std::max(1L, std::lround(snapshot_every / dt));

  auto write = [&](const TickRecord* tick) {
    const long seconds = tick ? std::lround(tick->t) : 0;
    std::ostringstream name;
    name << "snapshot_" << std::setw(4) << std::setfill('0') << seconds << ".svg";
    const std::string path = (fs::path(out_dir) / name.str()).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << render_scene_svg(log, tick);
    if (!f) throw IoError("failed writing " + path);
    return path;
  };

  std::vector<std::string> paths;
  if (log.ticks.empty()) {
    paths.push_back(write(nullptr));
    return paths;
  }
  for (const TickRecord& tick : log.ticks)
    if (tick.tick % every == 0) paths.push_back(write(&tick));
  return paths;
}

std::string render_loss_svg(const std::vector<LossPoint>& curve) {
  constexpr double w = 800.0, h = 500.0, pad = 60.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
      << w << ' ' << h << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "  <line class=\"axis\" x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
      << h - pad << "\" stroke=\"black\"/>\n";
  out << "  <line class=\"axis\" x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
      << "\" stroke=\"black\"/>\n";
  if (!curve.empty()) {
    // Log scale on the loss axis.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const LossPoint& p : curve)
      for (double l : {p.train_loss, p.val_loss})
        if (l > 0.0) {
          lo = std::min(lo, std::log10(l));
          hi = std::max(hi, std::log10(l));
        }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi - lo < 1e-9) hi = lo + 1.0;
    const double max_epoch = std::max(1, curve.back().epoch);
    auto x = [&](int e) { return pad + (w - 2 * pad) * (e - 1) / std::max(1.0, max_epoch - 1); };
    auto y = [&](double l) {
      const double v = l > 0.0 ? std::log10(l) : lo;
      return h - pad - (h - 2 * pad) * (v - lo) / (hi - lo);
    };
    auto polyline = [&](const char* cls, const char* color, auto get) {
      out << "  <polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const LossPoint& p : curve) out << fmt(x(p.epoch)) << ',' << fmt(y(get(p))) << ' ';
      out << "\"/>\n";
    };
    polyline("train-loss", "blue", [](const LossPoint& p) { return p.train_loss; });
    polyline("val-loss", "orange", [](const LossPoint& p) { return p.val_loss; });
    out << "  <text x=\"" << pad << "\" y=\"" << pad * 0.6 << "\" font-family=\"monospace\" font-size=\"14\">"
        << "loss (log10 " << fmt(lo) << " .. " << fmt(hi) << ") over " << curve.back().epoch << " epochs</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<LossPoint> read_loss_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open loss CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "epoch,train_loss,val_loss")
    throw IoError("loss CSV must start with header epoch,train_loss,val_loss");
  std::vector<LossPoint> curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    LossPoint p;
    char c1 = 0, c2 = 0;
    if (!(row >> p.epoch >> c1 >> p.train_loss >> c2 >> p.val_loss) || c1 != ',' || c2 != ',')
      throw IoError("malformed loss CSV row: " + line);
    curve.push_back(p);
  }
  return curve;
}

}  // namespace jamgcn
