//! Business-day calendar: weekdays minus a configurable holiday list.

use std::collections::BTreeSet;

use chrono::{Datelike, Days, NaiveDate, Weekday};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BusinessCalendar {
    id: String,
    skip_weekends: bool,
    holidays: BTreeSet<NaiveDate>,
}

impl Default for BusinessCalendar {
    fn default() -> Self {
        Self::weekdays()
    }
}

impl BusinessCalendar {
    /// Monday to Friday, no holidays.
    pub fn weekdays() -> Self {
        Self {
            id: "weekdays".to_string(),
            skip_weekends: true,
            holidays: BTreeSet::new(),
        }
    }

    /// Every calendar day is a business day. Useful for day-by-day series.
    pub fn every_day() -> Self {
        Self {
            id: "every-day".to_string(),
            skip_weekends: false,
            holidays: BTreeSet::new(),
        }
    }

    pub fn with_holidays<I: IntoIterator<Item = NaiveDate>>(mut self, holidays: I) -> Self {
        self.holidays.extend(holidays);
        if !self.holidays.is_empty() && !self.id.ends_with("+holidays") {
            self.id.push_str("+holidays");
        }
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn holidays(&self) -> impl Iterator<Item = &NaiveDate> {
        self.holidays.iter()
    }

    pub fn is_business_day(&self, date: NaiveDate) -> bool {
        if self.skip_weekends && matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
            return false;
        }
        !self.holidays.contains(&date)
    }

    /// First business day strictly after `date`.
    pub fn next_business_day(&self, date: NaiveDate) -> NaiveDate {
        let mut d = date + Days::new(1);
        while !self.is_business_day(d) {
            d = d + Days::new(1);
        }
        d
    }

    /// Latest business day on or before `date`.
    pub fn business_day_on_or_before(&self, date: NaiveDate) -> NaiveDate {
        let mut d = date;
        while !self.is_business_day(d) {
            d = d - Days::new(1);
        }
        d
    }

    /// Business days in `[start, end]`, ascending.
    pub fn business_days(&self, start: NaiveDate, end: NaiveDate) -> Vec<NaiveDate> {
        start
            .iter_days()
            .take_while(|d| *d <= end)
            .filter(|d| self.is_business_day(*d))
            .collect()
    }
}
