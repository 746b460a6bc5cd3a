#include "mssal/selection.hpp"

#include <cmath>
#include <stdexcept>

#include "mssal/em.hpp"

namespace mssal {

int count_free_params(int g, int p) {
    return (g - 1) + g * (3 * p + p * (p - 1) / 2);
}

double bic(double loglik, int rho, long n) {
    return 2.0 * loglik - rho * std::log(static_cast<double>(n));
}

SelectionReport select_model(const DataMatrix& data, int g_min, int g_max,
                             const FitConfig& cfg) {
    if (g_min < 1 || g_min > g_max) {
        throw std::invalid_argument("invalid component range");
    }
    if (data.n() <= g_max) {
        throw std::invalid_argument("need more observations than components");
    }

    SelectionReport report;
    int best = -1;
    std::vector<FitResult> fits(g_max - g_min + 1);
    for (int g = g_min; g <= g_max; ++g) {
        GRecord rec;
        rec.g = g;
        rec.rho = count_free_params(g, static_cast<int>(data.p()));
        int slot = g - g_min;
        try {
            fits[slot] = fit_em(data, g, cfg);
            rec.loglik = fits[slot].model.loglik;
            rec.bic = bic(rec.loglik, rec.rho, data.n());
            rec.converged = fits[slot].converged;
            if (!rec.converged) rec.note = "excluded: not converged";
        } catch (const std::runtime_error& e) {
            rec.loglik = std::nan("");
            rec.bic = std::nan("");
            rec.note = std::string("excluded: ") + e.what();
        }
        if (rec.converged &&
            (best < 0 || rec.bic > report.records[best - g_min].bic)) {
            best = g;
        }
        report.records.push_back(std::move(rec));
    }
    if (best < 0) {
        throw std::runtime_error("no component count produced a converged fit");
    }
    report.chosen_g = best;
    FitResult& win = fits[best - g_min];
    win.model.bic = report.records[best - g_min].bic;
    report.chosen_model = std::move(win.model);
    report.chosen_labels = std::move(win.map_labels);
    return report;
}

}  // namespace mssal
