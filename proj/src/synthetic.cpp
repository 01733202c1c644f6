#include "themetrack/synthetic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "themetrack/io.hpp"

namespace themetrack::synthetic {

namespace {

const std::vector<std::vector<std::string>> kLabels{
    {"image segmentation", "object detection", "optical flow", "edge detection", "stereo matching", "scene parsing",
     "pose estimation", "image denoising"},
    {"machine translation", "sentiment analysis", "named entity recognition", "text summarization",
     "question answering", "dependency parsing", "word embeddings", "topic modeling"},
    {"motion planning", "path planning", "inverse kinematics", "swarm coordination", "robot localization",
     "grasp synthesis", "legged locomotion", "visual servoing"},
};
const std::vector<std::string> kParents{"computer vision", "natural language processing", "robotics"};

// Relative popularity of a group's topics; the gap after the third keeps the
// top-3 set stable from one timeframe to the next.
const std::vector<double> kPopularity{10.0, 8.0, 6.5, 3.0, 2.5, 2.0, 1.5, 1.0};

const std::vector<std::string> kFiller{"we", "propose", "a", "novel", "method", "for", "and", "evaluate", "it",
                                       "on", "benchmark", "data", "with", "strong", "results", "the"};

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t weighted_pick(std::mt19937_64& rng, const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double r = unit(rng) * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (r < weights[i]) return i;
        r -= weights[i];
    }
    return weights.size() - 1;
}

}  // namespace

Dataset generate(const Spec& spec) {
    if (spec.groups < 1 || spec.groups > 3 || spec.topics_per_group < 3 || spec.topics_per_group > 8) {
        throw std::invalid_argument("synthetic spec supports 1-3 groups of 3-8 topics");
    }
    Dataset data;
    data.timeframes = {{"2010-14", {2010, 1}, {2014, 12}}, {"2015-19", {2015, 1}, {2019, 12}},
                       {"2020-22", {2020, 1}, {2022, 2}}};
    for (int g = 0; g < spec.groups; ++g) {
        std::vector<TopicId> group;
        for (int t = 0; t < spec.topics_per_group; ++t) {
            const auto& label = kLabels[g][t];
            data.ontology.push_back({kParents[g], "superTopicOf", label});
            group.push_back(normalize_label(label));
        }
        data.groups.push_back(std::move(group));
    }
    data.ontology.push_back({"word embeddings", "relatedEquivalent", "word vectors"});
    data.ontology.push_back({"robot localization", "contributesTo", "robotics"});

    std::mt19937_64 rng(spec.seed);
    const std::vector<double> popularity(kPopularity.begin(), kPopularity.begin() + spec.topics_per_group);
    for (std::size_t tf = 0; tf < data.timeframes.size(); ++tf) {
        const auto& bin = data.timeframes[tf];
        for (int i = 0; i < spec.docs_per_timeframe; ++i) {
            const int group = i % spec.groups;
            const auto want = 2 + static_cast<int>(rng() % 3);
            auto weights = popularity;
            std::vector<std::string> mentions;
            for (int k = 0; k < want; ++k) {
                const auto pick = weighted_pick(rng, weights);
                weights[pick] = 0.0;
                mentions.push_back(kLabels[group][pick]);
            }
            if (spec.groups > 1 && unit(rng) >= spec.within_group) {
                const int other = (group + 1 + static_cast<int>(rng() % (spec.groups - 1))) % spec.groups;
                mentions.push_back(kLabels[other][weighted_pick(rng, popularity)]);
            }

            Document doc;
            doc.id = fmt::format("SYN-{}-{:04d}", tf, i);
            doc.title = fmt::format("Deep learning for {}", mentions.front());
            for (std::size_t m = 1; m < mentions.size(); ++m) {
                for (int f = 0; f < 3; ++f) doc.abstract += kFiller[rng() % kFiller.size()] + " ";
                doc.abstract += mentions[m] + ". ";
            }
            doc.abstract += "Experiments use machine learning baselines.";
            const int span_years = bin.end.year - bin.start.year + 1;
            doc.year = bin.start.year + static_cast<int>(rng() % static_cast<unsigned>(span_years));
            const int last_month = doc.year == bin.end.year ? bin.end.month : 12;
            doc.month = 1 + static_cast<int>(rng() % static_cast<unsigned>(last_month));
            data.documents.push_back(std::move(doc));
        }
    }
    return data;
}

std::string ontology_csv(const Dataset& dataset) {
    std::string out;
    for (const auto& t : dataset.ontology) out += io::csv_row({t.subject, t.predicate, t.object});
    return out;
}

std::string timeframes_spec() { return "2010-14=2010..2014,2015-19=2015..2019,2020-22=2020-01..2022-02"; }

}  // namespace themetrack::synthetic
