#include "toolforge/instruction.hpp"

namespace toolforge {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::I1_single_tool: return "I1";
        case Scenario::I2_intra_category: return "I2";
        case Scenario::I3_intra_collection: return "I3";
    }
    return "I1";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "I1") return Scenario::I1_single_tool;
    if (s == "I2") return Scenario::I2_intra_category;
    if (s == "I3") return Scenario::I3_intra_collection;
    throw BadEnum("scenario", s);
}

json InstructionPair::to_json() const {
    json j;
    j["query"] = query;
    j["related_apis"] = json::array();
    for (const auto& k : related_apis) j["related_apis"].push_back(k.to_json());
    j["scenario"] = to_string(scenario);
    j["subset"] = json::array();
    for (const auto& k : subset) j["subset"].push_back(k.to_json());
    return j;
}

InstructionPair InstructionPair::from_json(const json& j) {
    InstructionPair p;
    p.query = j.at("query").get<std::string>();
    for (const auto& k : j.at("related_apis")) p.related_apis.push_back(ApiKey::from_json(k));
    p.scenario = scenario_from_string(j.value("scenario", "I1"));
    if (j.contains("subset"))
        for (const auto& k : j["subset"]) p.subset.push_back(ApiKey::from_json(k));
    return p;
}

namespace {

const char* kSingleSeedTexts[12] = {
    "Need to create an ASCII art representation of a mathematical equation, then render the "
    "text 'Newton's Second Law of Motion' in a styled font.",
    "Retrieve available art styles first, then generate banners for the strings 'ASCII', "
    "'art', and 'gallery' using those styles.",
    "Determine today's weather in Ohio, check how often it rains there in September, and "
    "find recent climate news for a school report.",
    "Generate a random longitude and latitude for a treasure-hunt game, then produce a "
    "themed image URL for the landing page.",
    "Fetch the list of supported currencies, convert 250 EUR to JPY, and show the weekly "
    "exchange-rate history for the pair.",
    "Look up the definition and two synonyms of the word 'serendipity', then produce an "
    "example sentence using it.",
    "Find the three latest news articles about electric vehicles and summarize the "
    "headline sentiment for each.",
    "Create placeholder profile data for a demo: a random full name, a job title, and a "
    "profile picture URL.",
    "Check whether the domain 'aurora-analytics.io' is available and list three similar "
    "free domains if it is taken.",
    "Get the nutritional breakdown for a recipe with 200g rice, 150g chicken and 50g "
    "spinach, then suggest a dessert under 300 kcal.",
    "Translate 'Good morning, friends' into French, German, and Japanese and give the "
    "romanized reading for the Japanese one.",
    "Produce a QR code for https://example.org/menu and a short URL for the same address.",
};

const char* kMultiSeedTexts[36] = {
    "I want to name my newborn cat after Kobe and host a party: get cat facts and NBA news "
    "for inspiration, and find a hotel near Houston Downtown for the party.",
    "For a surprise birthday party, suggest random words as party themes, gather news "
    "articles about party trends, and list local hotels for accommodation.",
    "Organizing a team-building event: collect motivational quotes about teamwork and news "
    "articles showcasing successful team events.",
    "I need cricket articles on the health benefits of sports and the chemical elements "
    "associated with exercising, like iron.",
    "Starting a business venture: provide quotes and random words for a speech, plus news "
    "articles about successful entrepreneurs.",
    "Plan a weekend in Lisbon: check the weather, find a well-rated seafood restaurant, "
    "and convert 500 USD to EUR for the budget.",
    "Prepare a geography quiz: fetch three country facts, a capital-city list for Europe, "
    "and a world-map image for the cover slide.",
    "Track my fitness week: log a 5km run, compute calories for a 70kg runner, and find a "
    "stretching video for recovery.",
    "Research stock ideas: get the latest price for AAPL, recent tech-sector news, and a "
    "currency conversion of 10000 JPY to USD.",
    "Set up a movie night: list top-rated science-fiction movies, fetch a poster for the "
    "winner, and order pizza delivery slots nearby.",
    "Holiday card workflow: generate a festive greeting text, translate it to Spanish, and "
    "render it as an image banner.",
    "Study helper: define 'photosynthesis', fetch a diagram image, and quiz me with three "
    "multiple-choice questions.",
    "Street-market stall: compute sales tax for three items, convert totals to GBP, and "
    "produce a QR code for the payment link.",
    "Music discovery: find trending indie tracks, get the lyrics of the first one, and "
    "search upcoming concerts in Berlin.",
    "Gardening plan: check the 7-day forecast, list vegetables to plant in spring, and set "
    "a watering reminder schedule.",
    "Job hunt: search data-analyst openings in Toronto, draft a short cover letter, and "
    "look up average salaries for the role.",
    "Cooking experiment: find a ramen recipe, list substitutions for pork, and compute the "
    "total calorie count per serving.",
    "Language practice: translate five greetings to Italian, get audio pronunciations, and "
    "schedule a daily practice reminder.",
    "Pet care: find vaccination schedules for puppies, nearby vet clinics in Austin, and a "
    "reminder for the next appointment.",
    "Home office upgrade: compare prices for two monitors, check delivery options to "
    "Denver, and compute the total in CAD.",
    "Wedding prep: shortlist florists in Seattle, get seasonal flower facts, and draft a "
    "thank-you note template.",
    "Road trip: plan a route from Madrid to Porto, list fuel stops, and check toll costs "
    "for a compact car.",
    "Astronomy night: get tonight's ISS pass times for Oslo, the moon phase, and a star "
    "chart image for 10pm.",
    "Newsletter issue: gather three AI-policy headlines, summarize each in one line, and "
    "generate a header illustration.",
    "Fantasy league: fetch last night's basketball box scores, injury reports, and news "
    "about my starting center.",
    "Bake sale: compute ingredient quantities for 60 cookies, list allergen substitutions, "
    "and make a flyer-ready product image.",
    "History deep-dive: timeline of the printing press, three related museum exhibits, and "
    "a quiz question set for students.",
    "Apartment search: list two-bedroom rentals in Brooklyn under $3500, commute times to "
    "Midtown, and a mortgage-vs-rent comparison.",
    "Podcast prep: pull recent episodes about climate tech, transcribe the intro of one, "
    "and draft five interview questions.",
    "Birthday gift: find gift ideas for a chess enthusiast, compare prices for two chess "
    "clocks, and check express shipping to Chicago.",
    "Health check: compute BMI for 180cm and 82kg, suggest a weekly exercise split, and "
    "find a sports clinic nearby.",
    "Event badge pipeline: generate attendee placeholder names, render QR codes for each, "
    "and produce a printable layout.",
    "Crypto snapshot: get BTC and ETH prices, 24h change, and the top three headlines "
    "moving the market.",
    "Garden pest help: identify a pest from a description, list organic treatments, and "
    "find suppliers that deliver to Vermont.",
    "Ski weekend: compare snow depth at two resorts, check road conditions, and convert "
    "lift-ticket prices to USD.",
    "Small-claims letter: look up the filing fee in my county, draft a demand letter, and "
    "compute interest on a $1200 debt.",
};

}  // namespace

std::vector<SeedExample> default_seed_pool() {
    std::vector<SeedExample> pool;
    pool.reserve(48);
    for (const char* t : kSingleSeedTexts) pool.push_back({SeedClass::single_tool, t});
    for (const char* t : kMultiSeedTexts) pool.push_back({SeedClass::multi_tool, t});
    return pool;
}

}  // namespace toolforge
