#include "sarkisov/io.hpp"

#include <fstream>

#include "sarkisov/errors.hpp"

namespace sarkisov {

namespace {

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return Int(j.get<std::string>());
    fail(ErrorKind::InvalidInput, "expected an integer");
}

Json int_to_json(const Int& v) {
    // Stays a JSON number when it fits, else a decimal string.
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return Json(static_cast<long long>(v));
    return Json(v.str());
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array()) fail(ErrorKind::InvalidInput, "expected a coordinate array");
    Vec v;
    for (const Json& c : j) v.push_back(int_from_json(c));
    return v;
}

Json vec_to_json(const Vec& v) {
    Json j = Json::array();
    for (const Int& c : v) j.push_back(int_to_json(c));
    return j;
}

} // namespace

Json fan_to_json(const Fan& f) {
    Json j;
    j["lattice_dim"] = f.dim;
    Json rays = Json::array();
    for (const Vec& r : f.rays) rays.push_back(vec_to_json(r));
    j["rays"] = rays;
    Json cones = Json::array();
    for (const auto& c : f.cones) cones.push_back(c);
    j["max_cones"] = cones;
    return j;
}

Fan fan_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("lattice_dim") || !j.contains("rays") || !j.contains("max_cones"))
        fail(ErrorKind::InvalidInput, "fan document needs lattice_dim, rays, max_cones");
    int dim = j.at("lattice_dim").get<int>();
    std::vector<Vec> rays;
    for (const Json& r : j.at("rays")) {
        Vec v = vec_from_json(r);
        if (static_cast<int>(v.size()) != dim)
            fail(ErrorKind::InvalidInput, "ray dimension does not match lattice_dim");
        rays.push_back(v);
    }
    std::vector<std::vector<int>> cones;
    for (const Json& c : j.at("max_cones")) {
        std::vector<int> cone;
        for (const Json& i : c) cone.push_back(i.get<int>());
        cones.push_back(cone);
    }
    return make_fan(dim, rays, cones);
}

Json rat_to_json(const Rat& r) { return Json(r.str()); }

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    fail(ErrorKind::InvalidInput, "expected a rational as \"p/q\" or an integer");
}

Json divisor_to_json(const InvariantDivisor& d) {
    Json j = Json::array();
    for (const Rat& c : d) j.push_back(rat_to_json(c));
    return j;
}

InvariantDivisor divisor_from_json(const Json& j, size_t expected_size) {
    if (!j.is_array() || j.size() != expected_size)
        fail(ErrorKind::InvalidInput, "divisor coefficient list has the wrong length");
    InvariantDivisor d;
    for (const Json& c : j) d.push_back(rat_from_json(c));
    return d;
}

Json system_to_json(const MonomialLinearSystem& h) {
    Json j;
    Json pts = Json::array();
    for (const Vec& m : h.points) pts.push_back(vec_to_json(m));
    j["points"] = pts;
    j["reference"] = divisor_to_json(h.reference);
    j["scale"] = rat_to_json(h.scale);
    return j;
}

MonomialLinearSystem system_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("points") || !j.contains("reference"))
        fail(ErrorKind::InvalidInput, "system document needs points and reference");
    MonomialLinearSystem h;
    for (const Json& p : j.at("points")) h.points.push_back(vec_from_json(p));
    if (h.points.empty()) fail(ErrorKind::InvalidInput, "system has no points");
    for (const Json& c : j.at("reference")) h.reference.push_back(rat_from_json(c));
    h.scale = j.contains("scale") ? rat_from_json(j.at("scale")) : Rat(1);
    if (h.scale.is_negative()) fail(ErrorKind::InvalidInput, "negative system scale");
    return h;
}

Json mat_to_json(const Mat& m) {
    Json j = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(int_to_json(m.at(i, c)));
        j.push_back(row);
    }
    return j;
}

Mat mat_from_json(const Json& j, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        fail(ErrorKind::InvalidInput, "matrix row count mismatch");
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            fail(ErrorKind::InvalidInput, "matrix column count mismatch");
        for (int c = 0; c < cols; ++c) m.at(i, c) = int_from_json(row.at(c));
    }
    return m;
}

Json mfs_to_json(const ToricMoriFibreSpace& x) {
    Json j;
    j["total"] = fan_to_json(x.total.fan);
    j["base"] = fan_to_json(x.base.fan);
    j["projection"] = mat_to_json(x.projection);
    return j;
}

ToricMoriFibreSpace mfs_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("total") || !j.contains("base"))
        fail(ErrorKind::InvalidInput, "Mori fibre space document needs total and base");
    Fan total = fan_from_json(j.at("total"));
    Fan base = fan_from_json(j.at("base"));
    if (!j.contains("projection"))
        fail(ErrorKind::InvalidInput, "Mori fibre space document is missing the projection");
    Mat proj = mat_from_json(j.at("projection"), base.dim, total.dim);
    return make_mfs(std::move(total), std::move(base), std::move(proj));
}

Job job_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("map"))
        fail(ErrorKind::InvalidInput, "job document needs a map");
    Job job;
    job.name = j.value("name", std::string("job"));
    const Json& m = j.at("map");
    ToricMoriFibreSpace source = mfs_from_json(m.at("source"));
    ToricMoriFibreSpace target = mfs_from_json(m.at("target"));
    Mat matrix = mat_from_json(m.at("matrix"), target.total.fan.dim, source.total.fan.dim);
    job.map = make_map(std::move(matrix), std::move(source), std::move(target));
    if (j.contains("system")) {
        job.h_target = system_from_json(j.at("system"));
        if (job.h_target.reference.size() != job.map.target.total.fan.rays.size())
            fail(ErrorKind::InvalidInput, "system reference does not match the target rays");
    } else if (j.contains("polarization")) {
        const Json& p = j.at("polarization");
        long m_mult = p.value("m", 1L);
        InvariantDivisor a = divisor_from_json(p.at("base_divisor"),
                                               job.map.target.base.fan.rays.size());
        job.h_target = polarization_system(job.map.target, m_mult, a);
    } else {
        fail(ErrorKind::InvalidInput, "job needs a system or a polarization");
    }
    return job;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::InvalidInput, "malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

Job load_job(const std::string& path) { return job_from_json(load_json_file(path)); }

ThresholdCase threshold_case_from_json(const Json& j) {
    ThresholdCase t;
    t.name = j.value("name", std::string("threshold_case"));
    t.variety = make_variety(fan_from_json(j.at("fan")));
    t.system = system_from_json(j.at("system"));
    if (t.system.reference.size() != t.variety.fan.rays.size())
        fail(ErrorKind::InvalidInput, "system reference does not match the fan rays");
    t.expected_canonical = rat_from_json(j.at("expected").at("canonical_threshold"));
    t.expected_lc = rat_from_json(j.at("expected").at("lc_threshold"));
    return t;
}

ThresholdCase load_threshold_case(const std::string& path) {
    return threshold_case_from_json(load_json_file(path));
}

Json degree_to_json(const SarkisovDegree& d) {
    Json j;
    j["mu"] = rat_to_json(d.mu);
    j["c"] = rat_to_json(d.c);
    j["e"] = d.e.is_infinite() ? Json("inf") : Json(static_cast<long long>(d.e.numerator()));
    return j;
}

Json augmented_to_json(const AugmentedSarkisovDegree& a) {
    Json j;
    j["mu"] = rat_to_json(a.mu);
    j["b"] = a.b;
    j["rho"] = rat_to_json(a.rho);
    j["d"] = rat_to_json(a.d);
    j["c_prime"] = rat_to_json(a.c_prime);
    j["e_prime"] = a.e_prime.is_infinite() ? Json("inf")
                                           : Json(static_cast<long long>(a.e_prime.numerator()));
    return j;
}

Json step_to_json(const MmpStep& s) {
    Json j;
    j["kind"] = contraction_kind_name(s.kind);
    j["ray_class"] = vec_to_json(s.ray_class);
    j["fan_after"] = fan_to_json(s.fan_after);
    j["canonical_after"] = s.canonical_after;
    if (s.kind == ContractionKind::Fibering) {
        j["base_after"] = fan_to_json(s.base_after);
        j["projection_after"] = mat_to_json(s.projection_after);
    }
    return j;
}

Json link_to_json(const SarkisovLink& l) {
    Json j;
    std::string kind = link_kind_name(l.kind);
    if (l.subtype) kind += l.subtype;
    j["kind"] = kind;
    if (l.extraction) j["extraction"] = vec_to_json(*l.extraction);
    Json steps = Json::array();
    for (const MmpStep& s : l.steps) steps.push_back(step_to_json(s));
    j["steps"] = steps;
    j["source"] = mfs_to_json(l.source);
    j["target"] = mfs_to_json(l.target);
    j["matrix"] = mat_to_json(l.matrix);
    return j;
}

Json sequence_to_json(const UntwistingSequence& s) {
    Json j;
    j["terminated"] = s.terminated;
    Json links = Json::array();
    for (const SarkisovLink& l : s.links) links.push_back(link_to_json(l));
    j["links"] = links;
    Json ledger = Json::array();
    for (const DegreeLedgerEntry& e : s.ledger) {
        Json le;
        le["degree"] = degree_to_json(e.degree);
        le["augmented"] = augmented_to_json(e.augmented);
        le["case"] = nfi_case_name(e.nfi);
        le["base_cl_rank"] = e.base_cl_rank;
        le["base_dim"] = e.base_dim;
        ledger.push_back(le);
    }
    j["ledger"] = ledger;
    j["residual_matrix"] = mat_to_json(s.residual.matrix);
    j["residual_square_isomorphism"] = s.terminated;
    return j;
}

Json monotonicity_to_json(const MonotonicityReport& r) {
    Json j;
    j["pass"] = r.pass;
    if (!r.pass) j["violation"] = r.violation;
    Json rows = Json::array();
    for (const MonotonicityRow& row : r.rows) {
        Json jr;
        jr["link"] = row.link;
        jr["case"] = row.case_label;
        jr["movement"] = row.movement;
        jr["pass"] = row.pass;
        if (!row.note.empty()) jr["note"] = row.note;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

} // namespace sarkisov
