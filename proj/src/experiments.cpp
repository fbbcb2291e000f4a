#include "stable_stein/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "stable_stein/bounds.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/rng.hpp"
#include "stable_stein/stable_dist.hpp"

namespace stable_stein {

namespace {

void check_lists(const ExperimentConfig& cfg, bool need_strikes) {
    if (cfg.n_list.empty() || cfg.n_list.size() != cfg.paths_list.size())
        throw std::invalid_argument("n_list and paths_list must be nonempty and matched");
    for (std::size_t n : cfg.n_list)
        if (n == 0) throw std::invalid_argument("summand counts must be positive");
    for (std::size_t p : cfg.paths_list)
        if (p == 0) throw std::invalid_argument("path counts must be positive");
    if (need_strikes) {
        if (cfg.M_list.empty()) throw std::invalid_argument("M_list must be nonempty");
        for (double m : cfg.M_list)
            if (!(m > 0.0)) throw std::invalid_argument("strikes must be positive");
    }
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

// ---- minimal SVG line charts ----

struct Series {
    std::string name;
    std::string color;
    std::vector<std::pair<double, double>> pts;
    bool markers = false;
    bool dashed = false;
};

std::string fmt_pix(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void write_svg_chart(std::ofstream& os, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series, bool log_x, bool log_y) {
    auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
    auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const Series& s : series) {
        for (auto [x, y] : s.pts) {
            const double a = tx(x);
            const double b = ty(y);
            if (!std::isfinite(a) || !std::isfinite(b)) continue;
            if (first) {
                xmin = xmax = a;
                ymin = ymax = b;
                first = false;
            } else {
                xmin = std::min(xmin, a);
                xmax = std::max(xmax, a);
                ymin = std::min(ymin, b);
                ymax = std::max(ymax, b);
            }
        }
    }
    const double xpad = (xmax > xmin) ? 0.05 * (xmax - xmin) : 1.0;
    const double ypad = (ymax > ymin) ? 0.05 * (ymax - ymin) : 1.0;
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    const double left = 70.0, right = 620.0, top = 45.0, bottom = 430.0;
    auto px = [&](double x) {
        return left + (tx(x) - xmin) / (xmax - xmin) * (right - left);
    };
    auto py = [&](double y) {
        return bottom - (ty(y) - ymin) / (ymax - ymin) * (bottom - top);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
          "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    os << "<rect x=\"" << fmt_pix(left) << "\" y=\"" << fmt_pix(top) << "\" width=\""
       << fmt_pix(right - left) << "\" height=\"" << fmt_pix(bottom - top)
       << "\" fill=\"none\" stroke=\"#888888\"/>\n";

    auto emit_tick = [&](bool on_x, double t, const std::string& label) {
        if (on_x) {
            const double p = left + (t - xmin) / (xmax - xmin) * (right - left);
            os << "<line x1=\"" << fmt_pix(p) << "\" y1=\"" << fmt_pix(top) << "\" x2=\""
               << fmt_pix(p) << "\" y2=\"" << fmt_pix(bottom)
               << "\" stroke=\"#dddddd\"/>\n";
            os << "<text x=\"" << fmt_pix(p) << "\" y=\"" << fmt_pix(bottom + 16.0)
               << "\" text-anchor=\"middle\">" << label << "</text>\n";
        } else {
            const double p = bottom - (t - ymin) / (ymax - ymin) * (bottom - top);
            os << "<line x1=\"" << fmt_pix(left) << "\" y1=\"" << fmt_pix(p) << "\" x2=\""
               << fmt_pix(right) << "\" y2=\"" << fmt_pix(p)
               << "\" stroke=\"#dddddd\"/>\n";
            os << "<text x=\"" << fmt_pix(left - 6.0) << "\" y=\"" << fmt_pix(p + 4.0)
               << "\" text-anchor=\"end\">" << label << "</text>\n";
        }
    };
    auto axis_ticks = [&](bool on_x, double lo, double hi, bool log_axis) {
        if (log_axis) {
            int emitted = 0;
            for (int k = static_cast<int>(std::ceil(lo)); k <= std::floor(hi); ++k) {
                emit_tick(on_x, static_cast<double>(k), "1e" + std::to_string(k));
                ++emitted;
            }
            if (emitted >= 2) return;
        }
        for (int i = 0; i <= 4; ++i) {
            const double t = lo + (hi - lo) * i / 4.0;
            emit_tick(on_x, t, fmt_tick(log_axis ? std::pow(10.0, t) : t));
        }
    };
    axis_ticks(true, xmin, xmax, log_x);
    axis_ticks(false, ymin, ymax, log_y);

    for (const Series& s : series) {
        if (s.pts.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"1.5\"";
            if (s.dashed) os << " stroke-dasharray=\"6 4\"";
            os << " points=\"";
            for (auto [x, y] : s.pts) os << fmt_pix(px(x)) << "," << fmt_pix(py(y)) << " ";
            os << "\"/>\n";
        }
        if (s.markers) {
            for (auto [x, y] : s.pts)
                os << "<circle cx=\"" << fmt_pix(px(x)) << "\" cy=\"" << fmt_pix(py(y))
                   << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        }
    }

    double legend_y = top + 16.0;
    for (const Series& s : series) {
        os << "<line x1=\"" << fmt_pix(right - 150.0) << "\" y1=\"" << fmt_pix(legend_y)
           << "\" x2=\"" << fmt_pix(right - 125.0) << "\" y2=\"" << fmt_pix(legend_y)
           << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << "/>\n";
        os << "<text x=\"" << fmt_pix(right - 118.0) << "\" y=\"" << fmt_pix(legend_y + 4.0)
           << "\">" << s.name << "</text>\n";
        legend_y += 18.0;
    }

    os << "<text x=\"" << fmt_pix((left + right) / 2.0)
       << "\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    os << "<text x=\"" << fmt_pix((left + right) / 2.0)
       << "\" y=\"465\" text-anchor=\"middle\">" << x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << fmt_pix((top + bottom) / 2.0)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fmt_pix((top + bottom) / 2.0) << ")\">" << y_label << "</text>\n";
    os << "</svg>\n";
}

// fits, dropping the smallest-n row once if its bootstrap CI is too wide
void attach_slope(ExperimentResult& out, std::uint64_t seed) {
    std::vector<std::pair<double, double>> pts;
    for (const KsRateRow& r : out.ks_rows)
        pts.emplace_back(static_cast<double>(r.n), r.ks);
    if (pts.size() < 2) return;
    SlopeFit fit = fit_loglog_slope(pts, seed);
    if (fit.ci && fit.ci->second - fit.ci->first > 0.2 && pts.size() > 2) {
        std::size_t drop = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].first < pts[drop].first) drop = i;
        out.excluded_n.push_back(static_cast<std::size_t>(pts[drop].first));
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(drop));
        fit = fit_loglog_slope(pts, seed);
    }
    out.slope = fit;
}

}  // namespace

double ks_statistic(const SampleBatch& samples,
                    const std::function<double(double)>& reference_cdf) {
    if (samples.values.empty()) throw EmptyBatch("KS statistic needs samples");
    std::vector<double> xs = samples.values;
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = reference_cdf(xs[i]);
        sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
    }
    return sup;
}

double ks_statistic_two_sample(const SampleBatch& a, const SampleBatch& b) {
    if (a.values.empty() || b.values.empty())
        throw EmptyBatch("two-sample KS needs two nonempty batches");
    std::vector<double> xa = a.values;
    std::vector<double> xb = b.values;
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    const double na = static_cast<double>(xa.size());
    const double nb = static_cast<double>(xb.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < xa.size() && j < xb.size()) {
        const double d = std::min(xa[i], xb[j]);
        while (i < xa.size() && xa[i] <= d) ++i;
        while (j < xb.size() && xb[j] <= d) ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / na -
                                     static_cast<double>(j) / nb));
    }
    return sup;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points,
                          std::uint64_t seed) {
    const std::size_t n = points.size();
    if (n < 2) throw DegenerateFit("log-log fit needs at least 2 points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
            throw DegenerateFit("log-log fit needs positive coordinates");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
    }
    auto ols = [](const std::vector<double>& xs,
                  const std::vector<double>& ys) -> std::optional<std::pair<double, double>> {
        const std::size_t m = xs.size();
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(m);
        my /= static_cast<double>(m);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        if (!(sxx > 0.0)) return std::nullopt;
        const double slope = sxy / sxx;
        return std::make_pair(slope, my - slope * mx);
    };
    const auto base = ols(lx, ly);
    if (!base) throw DegenerateFit("log-log fit needs at least 2 distinct x values");
    SlopeFit out;
    out.slope = base->first;
    out.intercept = base->second;
    if (n >= 4) {
        // residual bootstrap: the x design is fixed by the caller, so only the
        // scatter around the fitted line gets resampled; raw OLS residuals are
        // shrunk by the hat values, so rescale each by 1/sqrt(1 - h_i) and
        // recenter before drawing
        double mx = 0.0;
        for (double v : lx) mx += v;
        mx /= static_cast<double>(n);
        double sxx = 0.0;
        for (double v : lx) sxx += (v - mx) * (v - mx);
        std::vector<double> fitted(n), resid(n);
        double rbar = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            fitted[i] = base->second + base->first * lx[i];
            const double h =
                1.0 / static_cast<double>(n) + (lx[i] - mx) * (lx[i] - mx) / sxx;
            resid[i] = (ly[i] - fitted[i]) / std::sqrt(std::max(1.0 - h, 1e-12));
            rbar += resid[i];
        }
        rbar /= static_cast<double>(n);
        for (double& r : resid) r -= rbar;
        // studentize each resampled slope by its own standard error; raw
        // slope percentiles undercover at the handful of points a rate
        // curve provides
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ly[i] - fitted[i];
            rss += d * d;
        }
        const double dof = static_cast<double>(n - 2);
        const double se = std::sqrt(rss / dof / sxx);
        CounterRng rng(seed);
        std::uint64_t ctr = 0;
        std::vector<double> by(n);
        std::vector<double> tstats;
        tstats.reserve(1000);
        for (int rep = 0; rep < 1000; ++rep) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t idx = std::min(
                    n - 1, static_cast<std::size_t>(rng.uniform01(ctr++) *
                                                    static_cast<double>(n)));
                by[i] = fitted[i] + resid[idx];
            }
            const auto f = ols(lx, by);
            if (!f) continue;
            double rss_b = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = by[i] - (f->second + f->first * lx[i]);
                rss_b += d * d;
            }
            const double se_b = std::sqrt(rss_b / dof / sxx);
            tstats.push_back(se_b > 0.0 ? (f->first - base->first) / se_b : 0.0);
        }
        if (tstats.size() >= 100) {
            std::sort(tstats.begin(), tstats.end());
            // round the quantile ranks outward so the interval errs wide
            const double last = static_cast<double>(tstats.size() - 1);
            const double t_lo = tstats[static_cast<std::size_t>(
                std::floor(0.025 * last))];
            const double t_hi = tstats[static_cast<std::size_t>(
                std::ceil(0.975 * last))];
            out.ci = std::make_pair(base->first - t_hi * se,
                                    base->first - t_lo * se);
        }
    }
    return out;
}

std::vector<double> histogram_density(const std::vector<double>& samples, double lo,
                                      double hi, std::size_t bins) {
    if (samples.empty()) throw EmptyBatch("histogram needs samples");
    if (!(hi > lo) || bins == 0)
        throw std::invalid_argument("histogram needs hi > lo and at least one bin");
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<double> out(bins, 0.0);
    for (double x : samples) {
        if (x < lo || x >= hi) continue;
        const std::size_t b =
            std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
        out[b] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(samples.size()) * width);
    for (double& v : out) v *= scale;
    return out;
}

double silverman_bandwidth(const std::vector<double>& xs) {
    if (xs.size() < 2) throw EmptyBatch("bandwidth needs at least 2 samples");
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (n - 1.0);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        if (i + 1 >= sorted.size()) return sorted.back();
        return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    const double h = 0.9 * spread * std::pow(n, -0.2);
    return h > 0.0 ? h : 1e-3;
}

ExperimentResult run_ks_rate(const ExperimentConfig& cfg) {
    check_lists(cfg, false);
    ExperimentResult out;
    out.ks_mode = cfg.two_sample_ks ? "two-sample-" + std::to_string(cfg.stable_paths)
                                    : "exact-cdf";
    const auto grid = shared_density_grid(cfg.law.alpha, cfg.law.delta);
    SampleBatch reference;
    if (cfg.two_sample_ks) {
        if (cfg.stable_paths == 0)
            throw std::invalid_argument("two-sample mode needs stable_paths > 0");
        reference = sample_stable(StableParams{cfg.law.alpha, 1.0, cfg.law.delta},
                                  cfg.stable_paths, CounterRng(cfg.seed, 999).word(0));
    }
    for (std::size_t c = 0; c < cfg.n_list.size(); ++c) {
        SnConfig sc;
        sc.law = cfg.law;
        sc.n = cfg.n_list[c];
        sc.paths = cfg.paths_list[c];
        sc.seed = CounterRng(cfg.seed, 1000 + c).word(0);
        sc.budget = cfg.budget;
        sc.threads = cfg.threads;
        const SampleBatch sn = build_Sn(sc);
        const double ks =
            cfg.two_sample_ks
                ? ks_statistic_two_sample(sn, reference)
                : ks_statistic(sn, [&](double x) { return grid->cdf(x); });
        out.ks_rows.push_back({sc.n, sc.paths, ks});
    }
    attach_slope(out, cfg.seed);

    if (!cfg.output_dir.empty()) {
        {
            std::ofstream os = open_out(cfg.output_dir, "rates.csv");
            os << "n,ks\n";
            for (const KsRateRow& r : out.ks_rows)
                os << r.n << "," << format_double(r.ks) << "\n";
        }
        std::vector<Series> series;
        Series data{"KS", "#1f77b4", {}, true, false};
        for (const KsRateRow& r : out.ks_rows)
            data.pts.emplace_back(static_cast<double>(r.n), r.ks);
        series.push_back(std::move(data));
        if (out.slope) {
            Series fitted{"fit", "#d62728", {}, false, true};
            const double n0 = static_cast<double>(out.ks_rows.front().n);
            const double n1 = static_cast<double>(out.ks_rows.back().n);
            for (double x : {n0, n1})
                fitted.pts.emplace_back(
                    x, std::exp(out.slope->intercept + out.slope->slope * std::log(x)));
            series.push_back(std::move(fitted));
        }
        std::ofstream os = open_out(cfg.output_dir, "figure1a.svg");
        write_svg_chart(os, "KS distance vs sample size", "n", "KS distance", series,
                        true, true);
    }
    return out;
}

ExperimentResult run_call_error(const ExperimentConfig& cfg) {
    check_lists(cfg, true);
    ExperimentResult out;
    const StableParams limit{cfg.law.alpha, 1.0, cfg.law.delta};
    for (std::size_t c = 0; c < cfg.n_list.size(); ++c) {
        SnConfig sc;
        sc.law = cfg.law;
        sc.n = cfg.n_list[c];
        sc.paths = cfg.paths_list[c];
        sc.seed = CounterRng(cfg.seed, 2000 + c).word(0);
        sc.budget = cfg.budget;
        sc.threads = cfg.threads;
        const SampleBatch sn = build_Sn(sc);

        BoundInputs in = make_bound_inputs(cfg.law, static_cast<double>(sc.n),
                                           std::nullopt);
        const double rate = rate_Rn(cfg.law.alpha, cfg.law.gamma, in.sigma,
                                    static_cast<double>(sc.n), in.B_integral,
                                    in.B_sup_tail);
        const double c1 = const_c1(in);
        for (double M : cfg.M_list) {
            double bound = c1 * rate;
            if (cfg.nonuniform_bound) {
                in.M = M;
                const auto [c2, c3] = const_c2M_c3M(in);
                double constant = c2;
                if (c3) constant = std::min(constant, *c3);
                bound = constant * rate;
            }
            long double s1 = 0.0L, s2 = 0.0L;
            for (double s : sn.values) {
                const double z = s > M ? s - M : 0.0;
                s1 += z;
                s2 += static_cast<long double>(z) * z;
            }
            const double paths = static_cast<double>(sn.values.size());
            const double mc = static_cast<double>(s1 / paths);
            double se = 0.0;
            if (sn.values.size() > 1) {
                const long double var =
                    std::max(0.0L, (s2 - s1 * s1 / paths) / (paths - 1.0));
                se = std::sqrt(static_cast<double>(var) / paths);
            }
            const double reference = call_expectation_stable(limit, M);
            CallErrorCell cell;
            cell.n = sc.n;
            cell.M = M;
            cell.error = mc - reference;
            cell.se = se;
            cell.bound = bound;
            cell.pass = std::abs(cell.error) <= bound + 3.0 * se;
            if (!cell.pass) out.all_pass = false;
            out.call_cells.push_back(cell);
        }
    }

    if (!cfg.output_dir.empty()) {
        std::ofstream os = open_out(cfg.output_dir, "call_error.csv");
        os << "n,M,error,se,bound,pass\n";
        for (const CallErrorCell& cell : out.call_cells)
            os << cell.n << "," << format_double(cell.M) << ","
               << format_double(cell.error) << "," << format_double(cell.se) << ","
               << format_double(cell.bound) << "," << (cell.pass ? "true" : "false")
               << "\n";
    }
    return out;
}

void run_density_overlay(const ExperimentConfig& cfg) {
    if (cfg.output_dir.empty())
        throw std::invalid_argument("density overlay needs output_dir");
    validate_attraction_law(cfg.law);
    const std::size_t overlay_n[3] = {100, 500, 1000};
    const std::size_t overlay_paths = 8000;
    const double window = 10.0;

    std::vector<double> ys;
    for (int i = 0; i <= 600; ++i) ys.push_back(-15.0 + 0.05 * i);

    std::vector<std::vector<double>> columns;
    for (std::size_t k = 0; k < 3; ++k) {
        SnConfig sc;
        sc.law = cfg.law;
        sc.n = overlay_n[k];
        sc.paths = overlay_paths;
        sc.seed = CounterRng(cfg.seed, 3000 + k).word(0);
        sc.budget = cfg.budget;
        sc.threads = cfg.threads;
        const SampleBatch sn = build_Sn(sc);

        std::vector<double> central;
        for (double v : sn.values)
            if (std::abs(v) <= window) central.push_back(v);
        const double h = silverman_bandwidth(central);
        const std::vector<double> tail_hist = histogram_density(sn.values, -30.0, 30.0, 60);

        const double total = static_cast<double>(sn.values.size());
        const double norm = 1.0 / (total * h * std::sqrt(2.0 * std::numbers::pi));
        std::vector<double> col;
        col.reserve(ys.size());
        for (double y : ys) {
            if (std::abs(y) <= window) {
                double acc = 0.0;
                for (double x : central) {
                    const double t = (y - x) / h;
                    acc += std::exp(-0.5 * t * t);
                }
                col.push_back(acc * norm);
            } else {
                const std::size_t b = std::min<std::size_t>(
                    59, static_cast<std::size_t>((y + 30.0) / 1.0));
                col.push_back(tail_hist[b]);
            }
        }
        columns.push_back(std::move(col));
    }

    const StableParams limit{cfg.law.alpha, 1.0, cfg.law.delta};
    std::vector<double> exact;
    exact.reserve(ys.size());
    for (double y : ys) exact.push_back(density(limit, y));

    {
        std::ofstream os = open_out(cfg.output_dir, "density.csv");
        os << "y,f_n100,f_n500,f_n1000,f_stable\n";
        for (std::size_t i = 0; i < ys.size(); ++i)
            os << format_double(ys[i]) << "," << format_double(columns[0][i]) << ","
               << format_double(columns[1][i]) << "," << format_double(columns[2][i])
               << "," << format_double(exact[i]) << "\n";
    }

    std::vector<Series> series;
    const char* names[3] = {"n=100", "n=500", "n=1000"};
    const char* colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    for (std::size_t k = 0; k < 3; ++k) {
        Series s{names[k], colors[k], {}, false, false};
        for (std::size_t i = 0; i < ys.size(); ++i)
            if (std::abs(ys[i]) <= window) s.pts.emplace_back(ys[i], columns[k][i]);
        series.push_back(std::move(s));
    }
    Series limit_curve{"limit", "#000000", {}, false, false};
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (std::abs(ys[i]) <= window) limit_curve.pts.emplace_back(ys[i], exact[i]);
    series.push_back(std::move(limit_curve));
    std::ofstream os = open_out(cfg.output_dir, "figure1b.svg");
    write_svg_chart(os, "Empirical densities against the limit law", "y", "density",
                    series, false, false);
}

ExperimentResult run_full_experiment(const ExperimentConfig& cfg) {
    if (cfg.output_dir.empty())
        throw std::invalid_argument("full experiment needs output_dir");
    ExperimentResult ks = run_ks_rate(cfg);
    ExperimentResult call = run_call_error(cfg);
    run_density_overlay(cfg);

    ExperimentResult out = std::move(ks);
    out.call_cells = std::move(call.call_cells);
    out.all_pass = call.all_pass;

    nlohmann::ordered_json j;
    j["config"]["preset"] = cfg.law.preset.empty() ? "custom" : cfg.law.preset;
    j["config"]["alpha"] = cfg.law.alpha;
    j["config"]["delta"] = cfg.law.delta;
    j["config"]["A"] = cfg.law.A;
    j["config"]["gamma"] = cfg.law.gamma;
    j["config"]["L"] = cfg.law.L;
    j["config"]["n_list"] = cfg.n_list;
    j["config"]["paths_list"] = cfg.paths_list;
    j["config"]["M_list"] = cfg.M_list;
    j["config"]["seed"] = cfg.seed;
    j["config"]["stable_paths"] = cfg.stable_paths;
    j["config"]["ks_mode"] = out.ks_mode;
    j["config"]["nonuniform_bound"] = cfg.nonuniform_bound;
    if (out.slope) {
        j["slope"]["value"] = out.slope->slope;
        j["slope"]["intercept"] = out.slope->intercept;
        if (out.slope->ci)
            j["slope"]["ci"] = {out.slope->ci->first, out.slope->ci->second};
        else
            j["slope"]["ci"] = nullptr;
        j["slope"]["excluded_n"] = out.excluded_n;
    } else {
        j["slope"] = nullptr;
    }
    std::size_t failures = 0;
    for (const CallErrorCell& cell : out.call_cells)
        if (!cell.pass) ++failures;
    j["call_error"]["cells"] = out.call_cells.size();
    j["call_error"]["failures"] = failures;
    j["call_error"]["all_pass"] = out.all_pass;
    j["versions"]["stable-stein"] = kVersion;

    std::ofstream os = open_out(cfg.output_dir, "report.json");
    os << j.dump(2) << "\n";
    return out;
}

}  // namespace stable_stein
