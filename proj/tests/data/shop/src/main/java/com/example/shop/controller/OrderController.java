package com.example.shop.controller;

import com.example.shop.model.Order;
import com.example.shop.service.OrderService;
import org.springframework.web.bind.annotation.*;

import java.util.List;

@RestController
@RequestMapping("/orders")
public class OrderController {
    private final OrderService service;

    public OrderController(OrderService service) {
        this.service = service;
    }

    @GetMapping
    public List<Order> list() {
        return service.findAll();
    }

    @PostMapping
    public Order create(@RequestBody Order order) {
        // "@Service" inside a comment must not count
        return service.place(order);
    }
}
