#include "mssal/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace mssal {

namespace {

constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

json vec_to_json(const VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

VectorXd vec_from_json(const json& arr) {
    VectorXd v(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

json model_to_json(const MixtureModel& model, const ModelMeta& meta) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["g"] = model.g();
    j["p"] = model.dim();
    j["weights"] = vec_to_json(model.weights);
    json comps = json::array();
    for (const ComponentParams& c : model.components) {
        json jc;
        jc["mu"] = vec_to_json(c.mu);
        jc["beta"] = vec_to_json(c.beta);
        json rows = json::array();  // d_mat row-major
        for (Eigen::Index r = 0; r < c.d_mat.rows(); ++r) {
            rows.push_back(vec_to_json(c.d_mat.row(r).transpose()));
        }
        jc["d_mat"] = rows;
        jc["a_diag"] = vec_to_json(c.a_diag);
        comps.push_back(std::move(jc));
    }
    j["components"] = std::move(comps);
    j["loglik"] = model.loglik;
    j["bic"] = model.bic;
    j["rho"] = meta.rho;
    j["n"] = meta.n;
    j["n_iter"] = model.n_iter;
    j["seed"] = meta.seed;
    j["converged"] = meta.converged;
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void save_model(const MixtureModel& model, const ModelMeta& meta,
                const std::string& path) {
    write_json(model_to_json(model, meta), path);
}

MixtureModel load_model(const std::string& path, ModelMeta* meta) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("invalid model JSON in " + path + ": " + e.what());
    }
    if (!j.contains("schema_version") ||
        j["schema_version"].get<int>() != kSchemaVersion) {
        throw std::runtime_error("unsupported model schema in " + path);
    }

    MixtureModel model;
    try {
        int g = j.at("g").get<int>();
        int p = j.at("p").get<int>();
        model.weights = vec_from_json(j.at("weights"));
        for (const json& jc : j.at("components")) {
            ComponentParams c;
            c.mu = vec_from_json(jc.at("mu"));
            c.beta = vec_from_json(jc.at("beta"));
            const json& rows = jc.at("d_mat");
            c.d_mat.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (size_t r = 0; r < rows.size(); ++r) {
                c.d_mat.row(static_cast<Eigen::Index>(r)) =
                    vec_from_json(rows[r]).transpose();
            }
            c.a_diag = vec_from_json(jc.at("a_diag"));
            model.components.push_back(std::move(c));
        }
        model.loglik = j.at("loglik").get<double>();
        model.bic = j.at("bic").get<double>();
        model.n_iter = j.at("n_iter").get<int>();
        if (meta) {
            meta->rho = j.at("rho").get<int>();
            meta->n = j.at("n").get<long>();
            meta->seed = j.at("seed").get<std::uint64_t>();
            meta->converged = j.at("converged").get<bool>();
        }
        if (model.g() != g || model.dim() != p) {
            throw std::runtime_error("component table disagrees with g/p header");
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("invalid model JSON in " + path + ": " + e.what());
    }
    validate(model);
    return model;
}

void save_selection_report(const SelectionReport& report, long n,
                           std::uint64_t seed, const std::string& path) {
    json j;
    j["schema_version"] = kSchemaVersion;
    json recs = json::array();
    for (const GRecord& r : report.records) {
        json jr;
        jr["g"] = r.g;
        jr["loglik"] = r.loglik;
        jr["rho"] = r.rho;
        jr["bic"] = r.bic;
        jr["converged"] = r.converged;
        jr["note"] = r.note;
        recs.push_back(std::move(jr));
    }
    j["records"] = std::move(recs);
    j["chosen_g"] = report.chosen_g;
    ModelMeta meta;
    meta.rho = count_free_params(report.chosen_g,
                                 static_cast<int>(report.chosen_model.dim()));
    meta.n = n;
    meta.seed = seed;
    meta.converged = true;  // only converged fits can be chosen
    j["chosen_model"] = model_to_json(report.chosen_model, meta);
    write_json(j, path);
}

}  // namespace mssal
