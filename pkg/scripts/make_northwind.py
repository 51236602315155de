#!/usr/bin/env python3
"""Regenerate the pinned Northwind-style CSV snapshot under data/northwind/.

The generator is fully deterministic (no RNG): the committed CSVs are the
fixture of record and every golden count in the test suite is derived from
them.  Headline numbers the bundle is engineered to hit:

  * 91 customers across 21 countries, 29 suppliers -> 120 distinct
    (city, country, region, address, postalCode) tuples;
  * 1,200 orders over a pool of 89 distinct ship* tuples;
  * 1,474 nodes and 6,264 edges after ingest;
  * 5,574 embedded location/shipping property instances
    (5,574 / 209 distinct tuples ~= 26.67 reuse ratio).

Run from the repository root:  python3 scripts/make_northwind.py
"""

from __future__ import annotations

import csv
import datetime
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "data" / "northwind"

STREETS = [
    "Obere Str.", "Main St.", "Rue Cler", "Av. Brasil", "King Rd.",
    "Calle Mayor", "Via Roma", "Havnegade", "Kungsgatan", "Market Sq.",
]

COMPANY_A = [
    "Alpine", "Harbor", "Golden", "Cedar", "Northern", "Pacific", "Royal",
    "Silver", "Summit", "Vintage", "Coastal", "Meridian", "Lakeside",
]
COMPANY_B = [
    "Foods", "Trading", "Imports", "Markets", "Delicatessen", "Provisions",
    "Wholesale", "Grocers", "Exports",
]

# (country, customer count, cities, regions aligned with cities or None)
CUSTOMER_COUNTRIES = [
    ("Germany", 11, ["Berlin", "München", "Frankfurt", "Köln"], None),
    ("USA", 13, ["Seattle", "Portland", "Boise", "Albuquerque", "Eugene"],
     ["WA", "OR", "ID", "NM", "OR"]),
    ("France", 11, ["Paris", "Lyon", "Marseille", "Nantes", "Lille"], None),
    ("Brazil", 9, ["São Paulo", "Rio de Janeiro", "Campinas"],
     ["SP", "RJ", "SP"]),
    ("UK", 7, ["London", "Manchester", "Leeds"], None),
    ("Mexico", 5, ["México D.F.", "Guadalajara"], None),
    ("Spain", 5, ["Madrid", "Barcelona", "Sevilla", "Toledo"], None),
    ("Venezuela", 4, ["Caracas", "Barquisimeto"], None),
    ("Italy", 3, ["Torino", "Reggio Emilia"], None),
    ("Canada", 3, ["Montréal", "Vancouver"], ["Québec", "BC"]),
    ("Argentina", 3, ["Buenos Aires"], None),
    ("Austria", 2, ["Graz", "Salzburg"], None),
    ("Belgium", 2, ["Bruxelles", "Charleroi"], None),
    ("Denmark", 2, ["København", "Århus"], None),
    ("Finland", 2, ["Helsinki", "Oulu"], None),
    ("Portugal", 2, ["Lisboa"], None),
    ("Sweden", 2, ["Stockholm", "Luleå"], None),
    ("Switzerland", 2, ["Bern", "Genève"], None),
    ("Ireland", 1, ["Cork"], None),
    ("Norway", 1, ["Oslo"], None),
    ("Poland", 1, ["Warszawa"], None),
]

SUPPLIER_COUNTRIES = [
    ("UK", 2, ["London"], None),
    ("USA", 4, ["Toledo", "New Orleans", "Ann Arbor", "Boston"],
     ["OH", "LA", "MI", "MA"]),
    ("Japan", 2, ["Tokyo", "Osaka"], None),
    ("Spain", 1, ["Oviedo"], None),
    ("Italy", 2, ["Salerno", "Ravenna"], None),
    ("Brazil", 1, ["São Paulo"], None),
    ("Germany", 3, ["Berlin", "Cuxhaven", "Frankfurt"], None),
    ("Sweden", 2, ["Göteborg", "Stockholm"], None),
    ("France", 3, ["Paris", "Annecy", "Montceau"], None),
    ("Canada", 2, ["Montréal", "Ste-Hyacinthe"], ["Québec", "Québec"]),
    ("Norway", 1, ["Sandvika"], None),
    ("Denmark", 1, ["Lyngby"], None),
    ("Netherlands", 1, ["Zaandam"], None),
    ("Finland", 1, ["Lappeenranta"], None),
    ("Australia", 2, ["Sydney", "Melbourne"], None),
    ("Singapore", 1, ["Singapore"], None),
]

# Ship-tuple pool: (country, tuple count, cities, regions or None).  The pool
# order matters: 1,200 orders cycle over 89 tuples, so pool indexes 0..42
# serve 14 orders each and 43..88 serve 13.  Exactly 3 region-bearing tuples
# (Canada's two and one US tuple) sit in the 14-zone and 17 in the 13-zone,
# which pins the shipRegion instance count at 3*14 + 17*13 = 263.
SHIP_COUNTRIES = [
    ("Germany", 9, ["Berlin", "München", "Frankfurt", "Köln"], None),
    ("Canada", 2, ["Montréal", "Vancouver"], ["Québec", "BC"]),
    ("USA", 1, ["Seattle"], ["WA"]),
    ("France", 10, ["Paris", "Lyon", "Marseille", "Nantes", "Lille"], None),
    ("UK", 8, ["London", "Manchester", "Leeds"], None),
    ("Mexico", 5, ["México D.F.", "Guadalajara"], None),
    ("Spain", 4, ["Madrid", "Barcelona", "Sevilla", "Toledo"], None),
    ("Venezuela", 4, ["Caracas", "Barquisimeto"], None),
    ("Italy", 4, ["Torino", "Reggio Emilia"], None),
    ("Austria", 4, ["Graz", "Salzburg"], None),
    ("Belgium", 3, ["Bruxelles", "Charleroi"], None),
    ("Denmark", 3, ["København", "Århus"], None),
    ("Finland", 3, ["Helsinki", "Oulu"], None),
    ("Portugal", 2, ["Lisboa"], None),
    ("Sweden", 3, ["Stockholm", "Luleå"], None),
    ("Switzerland", 2, ["Bern", "Genève"], None),
    ("Ireland", 1, ["Cork"], None),
    ("Norway", 1, ["Oslo"], None),
    ("Argentina", 3, ["Buenos Aires"], None),
    ("USA", 11, ["Portland", "Boise", "Albuquerque", "Eugene", "Seattle"],
     ["OR", "ID", "NM", "OR", "WA"]),
    ("Brazil", 6, ["São Paulo", "Rio de Janeiro", "Campinas"],
     ["SP", "RJ", "SP"]),
]

CATEGORIES = [
    ("Beverages", "Soft drinks; coffees; teas; beers; ales"),
    ("Condiments", "Sweet and savory sauces; relishes; spreads; seasonings"),
    ("Confections", "Desserts; candies; sweet breads"),
    ("Dairy Products", "Cheeses"),
    ("Grains/Cereals", "Breads; crackers; pasta; cereal"),
    ("Meat/Poultry", "Prepared meats"),
    ("Produce", "Dried fruit; bean curd"),
    ("Seafood", "Seaweed; fish; shellfish"),
]

PRODUCT_WORDS = [
    "Chai", "Chang", "Aniseed", "Chef", "Gumbo", "Boysenberry", "Organic",
    "Cranberry", "Mishi", "Ikura", "Cabrales", "Queso", "Konbu", "Tofu",
    "Genen", "Pavlova", "Mutton", "Tigers", "Biscuits", "Marmalade",
]

EMPLOYEES = [
    ("Nancy", "Davolio", "Sales Representative"),
    ("Andrew", "Fuller", "Vice President, Sales"),
    ("Janet", "Leverling", "Sales Representative"),
    ("Margaret", "Peacock", "Sales Representative"),
    ("Steven", "Buchanan", "Sales Manager"),
    ("Michael", "Suyama", "Sales Representative"),
    ("Robert", "King", "Sales Representative"),
    ("Laura", "Callahan", "Inside Sales Coordinator"),
    ("Anne", "Dodsworth", "Sales Representative"),
]

SHIPPERS = ["Speedy Express", "United Package", "Federal Shipping"]
REGION_NAMES = ["Eastern", "Western", "Northern", "Southern"]

N_ORDERS = 1200
N_PRODUCTS = 77
N_TERRITORIES = 53
N_EMPLOYEE_TERRITORIES = 49


def company_name(i: int) -> str:
    return f"{COMPANY_A[i % len(COMPANY_A)]} {COMPANY_B[i % len(COMPANY_B)]} {i + 1}"


def contact_name(i: int) -> str:
    firsts = ["Maria", "Antonio", "Thomas", "Hanna", "Christina", "Yang",
              "Elizabeth", "Patricio", "Francisco", "Pedro"]
    lasts = ["Anders", "Moreno", "Hardy", "Moos", "Berglund", "Wang",
             "Lincoln", "Simpson", "Chang", "Afonso"]
    return f"{firsts[i % 10]} {lasts[(i // 10 + i) % 10]}"


def flatten_locations(table):
    """Expand (country, count, cities, regions) into per-entity rows."""
    rows = []
    for country, count, cities, regions in table:
        for j in range(count):
            city = cities[j % len(cities)]
            region = regions[j % len(cities)] if regions else ""
            rows.append((city, country, region))
    return rows


def write_csv(name, header, rows):
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with open(OUT_DIR / name, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"{name}: {len(rows)} rows")


def main():
    # customers -------------------------------------------------------------
    customer_rows = []
    for i, (city, country, region) in enumerate(
            flatten_locations(CUSTOMER_COUNTRIES)):
        customer_rows.append([
            f"C{i + 1:03d}",
            company_name(i),
            contact_name(i),
            f"{100 + i} {STREETS[i % len(STREETS)]}",
            city,
            region,
            f"{10000 + i * 13}",
            country,
            f"(0{i % 10}) 555-{1000 + i}",
        ])
    assert len(customer_rows) == 91
    write_csv("customers.csv",
              ["customerID", "companyName", "contactName", "address", "city",
               "region", "postalCode", "country", "phone"],
              customer_rows)

    # suppliers -------------------------------------------------------------
    supplier_rows = []
    for i, (city, country, region) in enumerate(
            flatten_locations(SUPPLIER_COUNTRIES)):
        supplier_rows.append([
            f"S{i + 1:02d}",
            company_name(i + 100),
            contact_name(i + 40),
            f"{300 + i} {STREETS[(i + 3) % len(STREETS)]}",
            city,
            region,
            f"{50000 + i * 17}",
            country,
            f"(1{i % 10}) 555-{2000 + i}",
        ])
    assert len(supplier_rows) == 29
    write_csv("suppliers.csv",
              ["supplierID", "companyName", "contactName", "address", "city",
               "region", "postalCode", "country", "phone"],
              supplier_rows)

    # ship tuple pool ---------------------------------------------------------
    ship_pool = []
    for j, (city, country, region) in enumerate(
            flatten_locations(SHIP_COUNTRIES)):
        ship_pool.append({
            "shipCity": city,
            "shipCountry": country,
            "shipRegion": region,
            "shipAddress": f"{700 + j} {STREETS[(j + 5) % len(STREETS)]}",
            "shipPostalCode": f"{80000 + j * 11}",
        })
    assert len(ship_pool) == 89

    # orders ------------------------------------------------------------------
    order_rows = []
    base_date = datetime.date(2024, 1, 1)
    for i in range(N_ORDERS):
        ship = ship_pool[i % len(ship_pool)]
        order_date = base_date + datetime.timedelta(days=i % 365)
        order_rows.append([
            str(10000 + i),
            customer_rows[i % 91][0],
            str(i % 9 + 1),
            order_date.isoformat(),
            (order_date + datetime.timedelta(days=14)).isoformat(),
            str(i % 3 + 1),
            f"{(i * 7 % 2000) / 10:.2f}",
            customer_rows[i % 91][1],
            ship["shipAddress"],
            ship["shipCity"],
            ship["shipRegion"],
            ship["shipPostalCode"],
            ship["shipCountry"],
        ])
    write_csv("orders.csv",
              ["orderID", "customerID", "employeeID", "orderDate",
               "requiredDate", "shipVia", "freight", "shipName",
               "shipAddress", "shipCity", "shipRegion", "shipPostalCode",
               "shipCountry"],
              order_rows)

    # categories / products ---------------------------------------------------
    write_csv("categories.csv",
              ["categoryID", "categoryName", "description"],
              [[str(i + 1), name, desc]
               for i, (name, desc) in enumerate(CATEGORIES)])

    product_rows = []
    for i in range(N_PRODUCTS):
        product_rows.append([
            str(i + 1),
            f"{PRODUCT_WORDS[i % len(PRODUCT_WORDS)]} "
            f"{PRODUCT_WORDS[(i * 3 + 7) % len(PRODUCT_WORDS)]} {i + 1}",
            f"S{i % 29 + 1:02d}",
            str(i % 8 + 1),
            f"{(i * 13 % 400) / 4 + 2:.2f}",
            str(i * 5 % 120),
        ])
    write_csv("products.csv",
              ["productID", "productName", "supplierID", "categoryID",
               "unitPrice", "unitsInStock"],
              product_rows)

    # order details -----------------------------------------------------------
    detail_rows = []
    for i in range(N_ORDERS):
        for slot in range(2):
            pid = (2 * i + slot) % N_PRODUCTS + 1
            detail_rows.append([
                str(10000 + i),
                str(pid),
                str(i % 20 + 1),
                product_rows[pid - 1][4],
            ])
    write_csv("order_details.csv",
              ["orderID", "productID", "quantity", "unitPrice"],
              detail_rows)

    # employees / shippers / regions / territories ----------------------------
    employee_rows = []
    for i, (first, last, title) in enumerate(EMPLOYEES):
        eid = i + 1
        reports_to = "" if eid == 1 else ("1" if eid <= 5 else "2")
        employee_rows.append([str(eid), first, last, title, reports_to])
    write_csv("employees.csv",
              ["employeeID", "firstName", "lastName", "title", "reportsTo"],
              employee_rows)

    write_csv("shippers.csv",
              ["shipperID", "companyName", "phone"],
              [[str(i + 1), name, f"(503) 555-98{30 + i}"]
               for i, name in enumerate(SHIPPERS)])

    write_csv("regions.csv",
              ["regionID", "regionDescription"],
              [[str(i + 1), name] for i, name in enumerate(REGION_NAMES)])

    territory_rows = [
        [f"T{i + 1:02d}",
         f"{REGION_NAMES[i % 4]} District {i + 1}",
         str(i % 4 + 1)]
        for i in range(N_TERRITORIES)
    ]
    write_csv("territories.csv",
              ["territoryID", "territoryDescription", "regionID"],
              territory_rows)

    write_csv("employee_territories.csv",
              ["employeeID", "territoryID"],
              [[str(i % 9 + 1), territory_rows[i][0]]
               for i in range(N_EMPLOYEE_TERRITORIES)])


if __name__ == "__main__":
    main()
