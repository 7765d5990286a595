pub(crate) const LABELS: &[&str] = &[
    "Apples", "Pears", "Plums", "Grapes", "Kiwi", "Mango", "Lemons", "Cherry", "Figs", "Dates", "Oslo", "Lima",
    "Cairo", "Tokyo", "Paris", "Quito", "Dakar", "Perth", "Delhi", "Seoul", "North", "South", "East", "West",
    "Retail", "Energy", "Health", "Mining", "Travel", "Media", "Banks", "Steel", "Autos", "Cloud", "Games",
    "Other", "Misc", "Alpha", "Beta", "Gamma", "Delta", "Omega", "Sigma", "Nova", "Vega", "Orion", "Lyra",
    "Wind", "Solar", "Hydro", "Coal", "Gas", "Oil", "Tea", "Cocoa", "Rice", "Wheat", "Corn", "Barley",
    "Team A", "Team B", "Group X", "Zone 4", "Q1 Plan", "Net Cash",
];

pub(crate) const SERIES: &[&str] = &[
    "Revenue", "Costs", "Profit", "Users", "Visits", "Orders", "Returns", "Signups", "Demand", "Supply",
    "Output", "Exports", "Imports", "Budget", "Forecast", "Actual",
];

pub(crate) const TITLE_A: &[&str] = &[
    "Annual", "Quarterly", "Monthly", "Regional", "Global", "Average", "Total", "Projected", "Observed", "Weekly",
];

pub(crate) const TITLE_B: &[&str] = &[
    "Sales", "Revenue", "Market Share", "Usage", "Growth", "Spending", "Emissions", "Yield", "Traffic", "Output",
];

pub(crate) const AXIS_TITLES: &[&str] = &[
    "Value", "Amount", "Count", "Share", "Units", "Score", "Rate", "Volume", "Index", "Level", "Time", "Year",
];
