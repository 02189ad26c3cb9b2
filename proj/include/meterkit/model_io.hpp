#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "meterkit/csv.hpp"
#include "meterkit/kmeans.hpp"

namespace meterkit {

inline nlohmann::json model_to_json(const ClusterModel& model) {
    return nlohmann::json{{"k", model.k},
                          {"seed", model.seed},
                          {"restarts", model.restarts},
                          {"inertia", model.inertia},
                          {"silhouette", model.silhouette},
                          {"centroids", model.centroids},
                          {"member_counts", model.member_counts}};
}

inline ClusterModel model_from_json(const nlohmann::json& j) {
    ClusterModel model;
    try {
        model.k = j.at("k").get<int>();
        model.seed = j.at("seed").get<std::uint64_t>();
        model.restarts = j.at("restarts").get<int>();
        model.inertia = j.at("inertia").get<double>();
        model.silhouette = j.at("silhouette").get<double>();
        model.centroids = j.at("centroids").get<std::vector<Point>>();
        model.member_counts = j.at("member_counts").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad model JSON: ") + e.what());
    }
    if (model.k < 2 || model.centroids.size() != std::size_t(model.k) ||
        model.member_counts.size() != std::size_t(model.k))
        throw FormatError("bad model JSON: inconsistent k");
    const std::size_t dim = model.centroids[0].size();
    for (const auto& c : model.centroids)
        if (c.size() != dim || dim == 0) throw FormatError("bad model JSON: bad centroid shape");
    return model;
}

/// JSON round-trips preserve every decimal exactly: doubles are emitted in
/// shortest round-trip form.
inline std::string model_to_string(const ClusterModel& model) {
    return model_to_json(model).dump(2) + "\n";
}

inline ClusterModel model_from_string(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw FormatError("bad model JSON: parse error");
    return model_from_json(j);
}

inline void save_model(const std::filesystem::path& path, const ClusterModel& model) {
    write_text_file(path, model_to_string(model));
}

inline ClusterModel load_model(const std::filesystem::path& path) {
    return model_from_string(read_text_file(path));
}

}  // namespace meterkit
